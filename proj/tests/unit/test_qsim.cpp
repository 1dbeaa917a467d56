#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "levyqsd/error.hpp"
#include "levyqsd/expansion.hpp"
#include "levyqsd/qsim.hpp"
#include "levyqsd/rng.hpp"
#include "levyqsd/transform_lab.hpp"

using namespace levyqsd;
using testing::brownian_sp;
using testing::me2;

namespace {

/// Kolmogorov-Smirnov statistic of a sample against a continuous CDF.
template <class Cdf>
double ks_stat(std::vector<double> xs, Cdf cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, f - i / n, (i + 1) / n - f});
    }
    return d;
}

double analytic_survival(const LevyModel& m, double t) {
    return invert_time(AnalyticModel(m), 0.0, 0.0, {t}, InversionConfig{}).survival[0];
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
    Rng a(42, 7);
    Rng b(42, 7);
    Rng c(42, 8);
    Rng d(43, 7);
    bool differ_c = false;
    bool differ_d = false;
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t x = a.next_u64();
        CHECK(x == b.next_u64());
        differ_c = differ_c || x != c.next_u64();
        differ_d = differ_d || x != d.next_u64();
    }
    CHECK(differ_c);
    CHECK(differ_d);
}

TEST_CASE("uniform, normal and exponential variates") {
    Rng r(1, 0);
    const int n = 200000;
    std::vector<double> u(n);
    std::vector<double> z(n);
    std::vector<double> e(n);
    for (int i = 0; i < n; ++i) {
        u[i] = r.uniform();
        CHECK_UNARY(u[i] > 0.0 && u[i] < 1.0);
        z[i] = r.normal();
        e[i] = r.exponential(2.0);
    }
    const double crit = 1.63 / std::sqrt(static_cast<double>(n));  // 1% level
    CHECK(ks_stat(u, [](double x) { return x; }) < crit);
    CHECK(ks_stat(z, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }) < crit);
    CHECK(ks_stat(e, [](double x) { return 1.0 - std::exp(-2.0 * x); }) < crit);
}

TEST_CASE("Erlang and geometric variates have the right moments") {
    Rng r(3, 1);
    const int n = 400000;
    double se = 0.0;
    double sg = 0.0;
    for (int i = 0; i < n; ++i) {
        se += r.erlang(2, 3.0);
        sg += static_cast<double>(r.geometric_failures(0.25));
    }
    // Erlang(2, 3): mean 2/3, sd sqrt(2)/3. Geometric failures: mean q/(1-q) = 1/3, sd sqrt(q)/(1-q).
    CHECK(std::abs(se / n - 2.0 / 3.0) < 4.0 * (std::sqrt(2.0) / 3.0) / std::sqrt(n));
    CHECK(std::abs(sg / n - 1.0 / 3.0) < 4.0 * (0.5 / 0.75) / std::sqrt(n));
}

TEST_CASE("stationary sampling") {
    const int n = 1000000;
    SUBCASE("Brownian workload is Exp(2)") {
        Rng r(11, 0);
        std::vector<double> xs(n);
        double sum = 0.0;
        double sum2 = 0.0;
        for (auto& x : xs) {
            x = sample_stationary(brownian_sp(), r);
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / n;
        const double sd = std::sqrt(sum2 / n - mean * mean);
        CHECK(std::abs(mean - 0.5) < 3.0 * sd / std::sqrt(n));
        CHECK(ks_stat(xs, [](double x) { return 1.0 - std::exp(-2.0 * x); }) < 1.63 / std::sqrt(n));
    }
    SUBCASE("M/E(2,3)/1 atom and Pollaczek-Khinchine mean") {
        Rng r(12, 0);
        double zeros = 0.0;
        double sum = 0.0;
        double sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = sample_stationary(me2(), r);
            zeros += x == 0.0 ? 1.0 : 0.0;
            sum += x;
            sum2 += x * x;
        }
        const double p0 = zeros / n;
        CHECK(std::abs(p0 - 1.0 / 3.0) < 3.0 * std::sqrt(p0 * (1.0 - p0) / n));
        // lambda E[S^2] / (2 (1 - rho)) with E[S^2] = k (k + 1) / nu^2.
        const double pk_mean = 1.0 * (6.0 / 9.0) / (2.0 * (1.0 / 3.0));
        const double mean = sum / n;
        const double sd = std::sqrt(sum2 / n - mean * mean);
        CHECK(std::abs(mean - pk_mean) < 3.0 * sd / std::sqrt(n));
    }
}

TEST_CASE("reflected process keeps the stationary law") {
    const int n = 100000;
    Rng r(21, 0);
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) {
        Rng path(21, 1000 + i);
        xs[i] = simulate_reflected(brownian_sp(), sample_stationary(brownian_sp(), r), 1.0, path, 1e-2);
    }
    // The bridge minimum makes each step exact, so no discretisation allowance.
    CHECK(ks_stat(xs, [](double x) { return 1.0 - std::exp(-2.0 * x); }) < 1.63 / std::sqrt(n));
}

TEST_CASE("busy-period paths") {
    SUBCASE("no arrivals: deterministic drift to 0") {
        const LevyModel quiet = LevyModel::cp_erlang(1e-12, 2, 3.0);
        Rng r(5, 0);
        const BusyOutcome o = simulate_busy(quiet, 0.5, 1.0, r);
        CHECK_FALSE(o.survived);
        CHECK(o.hit_time == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("a far start survives a short horizon") {
        for (const auto& m : {brownian_sp(), me2()}) {
            int alive = 0;
            for (int i = 0; i < 1000; ++i) {
                Rng r(6, i);
                alive += simulate_busy(m, 50.0, 1.0, r, 1e-2).survived ? 1 : 0;
            }
            CHECK(alive == 1000);
        }
    }
    SUBCASE("checkpoints agree with single-horizon runs") {
        for (const auto& m : {brownian_sp(), me2()}) {
            for (int i = 0; i < 200; ++i) {
                Rng a(8, i);
                Rng b(8, i);
                const auto path = simulate_busy_path(m, 1.0, {0.5, 1.0, 2.0}, a, 1e-2);
                const BusyOutcome one = simulate_busy(m, 1.0, 2.0, b, 1e-2);
                CHECK(path.back().survived == one.survived);
                if (one.survived) CHECK(path.back().q_t == doctest::Approx(one.q_t).epsilon(1e-12));
                CHECK_UNARY(!(path[1].survived && !path[0].survived));
            }
        }
    }
}

TEST_CASE("tilted dynamics remove the drift") {
    const LevyModel t = tilted_dynamics(brownian_sp());
    const auto& b = std::get<LinearBrownian>(t.family());
    CHECK(b.sigma == 1.0);
    CHECK(b.c == 0.0);
    const TiltParameters p = tilt_parameters(brownian_sp());
    CHECK(std::abs(p.zeta_star) == doctest::Approx(0.5).epsilon(1e-12));
    const LevyModel tc = tilted_dynamics(me2());
    CHECK(netput_drift(tc) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("config validation") {
    SimConfig c{brownian_sp()};
    c.horizon = 1.0;
    c.brownian_step = 0.02;
    CHECK_THROWS_AS(c.validate(), Error);
    c.brownian_step = 0.01;
    CHECK_NOTHROW(c.validate());
    c.replications = 0;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("estimates do not depend on the thread count") {
    for (const auto& m : {brownian_sp(), me2()}) {
        SimConfig c{m, 3.0, 20000, 99, Tilt::ThetaStar, 0.03};
        const Estimate one = estimate_survival(c);
        c.threads = 3;
        const Estimate three = estimate_survival(c);
        CHECK(one.value == three.value);
        CHECK(one.std_error == three.std_error);
        const Estimate cond1 = estimate_conditional_transform(c, 1.0, 0.5);
        c.threads = 1;
        CHECK(cond1.value == estimate_conditional_transform(c, 1.0, 0.5).value);
    }
}

TEST_CASE("estimator bookkeeping") {
    SimConfig c{brownian_sp(), 2.0, 5000, 4, Tilt::ThetaStar, 0.02};
    const Estimate e = estimate_survival(c);
    CHECK(e.std_error >= 0.0);
    CHECK(e.n_effective <= static_cast<double>(e.replications));
    CHECK(e.seed == 4);
    const Estimate one = estimate_conditional_transform(c, 0.0, 0.0);
    CHECK(one.value == 1.0);
    CHECK(one.std_error == 0.0);
}

TEST_CASE("survival frequency matches inversion for Brownian at t = 5") {
    const double exact = analytic_survival(brownian_sp(), 5.0);
    SimConfig c{brownian_sp(), 5.0, 1000000, 2024, Tilt::None, 0.05};
    const Estimate e = estimate_survival(c);
    CHECK(std::abs(e.value - exact) < 3.0 * e.std_error);
}

TEST_CASE("halving the Brownian step leaves the survival estimate unbiased") {
    // Two independent runs differ by more than one standard error about half
    // the time, so the check uses three combined standard errors and the
    // analytic value.
    const double exact = analytic_survival(brownian_sp(), 5.0);
    SimConfig c{brownian_sp(), 5.0, 400000, 31, Tilt::ThetaStar, 0.05};
    const Estimate coarse = estimate_survival(c);
    c.brownian_step = 0.025;
    c.seed = 32;
    const Estimate fine = estimate_survival(c);
    CHECK(std::abs(coarse.value - fine.value) < 3.0 * std::hypot(coarse.std_error, fine.std_error));
    CHECK(std::abs(coarse.value - exact) < 3.0 * coarse.std_error);
    CHECK(std::abs(fine.value - exact) < 3.0 * fine.std_error);
}

TEST_CASE("tilted and untilted estimates agree for compound Poisson") {
    const double exact = analytic_survival(me2(), 5.0);
    SimConfig c{me2(), 5.0, 200000, 77, Tilt::None};
    const Estimate plain = estimate_survival(c);
    c.tilt = Tilt::ThetaStar;
    c.seed = 78;
    const Estimate tilted = estimate_survival(c);
    CHECK(std::abs(plain.value - tilted.value) < 3.0 * std::hypot(plain.std_error, tilted.std_error));
    CHECK(std::abs(tilted.value - exact) < 3.0 * tilted.std_error);
}

TEST_CASE("tilting reduces the variance of rare survival") {
    SimConfig c{me2(), 40.0, 50000, 81, Tilt::None};
    const Estimate plain = estimate_survival(c);
    c.tilt = Tilt::ThetaStar;
    const Estimate tilted = estimate_survival(c);
    CHECK(tilted.std_error < 0.5 * plain.std_error);
}

TEST_CASE("conditional transform estimates") {
    const AnalyticModel am(brownian_sp());
    SUBCASE("t = 10 against inversion") {
        SimConfig c{brownian_sp(), 10.0, 1000000, 555, Tilt::ThetaStar, 0.1};
        const Estimate e = estimate_conditional_transform(c, 1.0, 1.0);
        const double exact = invert_time(am, 1.0, 1.0, {10.0}, InversionConfig{}).conditional[0];
        CHECK(std::abs(e.value - exact) < 3.0 * e.std_error);
    }
    SUBCASE("t = 30 against the two-term prediction") {
        SimConfig c{brownian_sp(), 30.0, 1000000, 556, Tilt::ThetaStar, 0.3};
        const Estimate e = estimate_conditional_transform(c, 1.0, 1.0);
        const RateProfile rp = rate_profile(am, 1.0, 1.0, {30.0}, InversionConfig{});
        const double predicted = rp.mu_tilde + rp.predicted_limit / 30.0;
        CHECK(std::abs(e.value - predicted) < 3.0 * e.std_error);
    }
}

TEST_CASE("convergence study pairs simulation with inversion") {
    SimConfig c{me2(), 1.0, 100000, 9, Tilt::ThetaStar};
    const std::vector<double> grid{2.0, 4.0, 8.0};
    const ConvergenceStudy st = convergence_study(c, 1.0, 1.0, grid);
    REQUIRE(st.rows.size() == 3);
    for (const auto& row : st.rows) {
        CHECK(std::abs(row.survival.value - row.analytic_survival) < 4.0 * row.survival.std_error);
        CHECK(std::abs(row.conditional.value - row.analytic_conditional) < 4.0 * row.conditional.std_error);
        CHECK(row.profile == doctest::Approx(row.t * (row.conditional.value - st.mu_tilde)).epsilon(1e-12));
    }
    const ConvergenceStudy zero = convergence_study(c, 0.0, 0.0, grid);
    for (const auto& row : zero.rows) CHECK(std::abs(row.profile) < 1e-12);
}
