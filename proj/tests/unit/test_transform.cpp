#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "levyqsd/error.hpp"
#include "levyqsd/euler_inversion.hpp"
#include "levyqsd/transform_lab.hpp"
#include "verify/reference_forms.hpp"

using namespace levyqsd;
using testing::brownian_sp;
using testing::me2;

TEST_CASE("Euler inversion of elementary transforms") {
    const EulerSettings s;
    for (double t : {0.1, 1.0, 5.0, 20.0}) {
        const EulerResult e = euler_invert([](Complex z) { return 1.0 / (z + 1.0); }, t, -1.0, s);
        CHECK(e.value == doctest::Approx(std::exp(-t)).epsilon(1e-8));
        const EulerResult r = euler_invert([](Complex z) { return 1.0 / (z * z); }, t, 0.0, s);
        CHECK(r.value == doctest::Approx(t).epsilon(1e-8));
        // Branch point at 0: L{t^{-1/2}} = sqrt(pi / s).
        const EulerResult b = euler_invert([](Complex z) { return std::sqrt(M_PI / z); }, t, 0.0, s);
        CHECK(b.value == doctest::Approx(1.0 / std::sqrt(t)).epsilon(1e-7));
        CHECK(b.error < 1e-7);
    }
}

TEST_CASE("complex Euler variant returns complex originals") {
    // L{exp(i t)} = 1 / (s - i).
    const EulerComplexResult e =
        euler_invert_complex([](Complex z) { return 1.0 / (z - Complex(0.0, 1.0)); }, 2.0, 0.0, EulerSettings{});
    CHECK(e.value.real() == doctest::Approx(std::cos(2.0)).epsilon(1e-7));
    CHECK(e.value.imag() == doctest::Approx(std::sin(2.0)).epsilon(1e-7));
}

TEST_CASE("inversion config validation") {
    InversionConfig c;
    CHECK_NOTHROW(c.validate());
    c.terms = 40;
    CHECK_THROWS_AS(c.validate(), Error);
    c.terms = 19;
    CHECK_THROWS_AS(c.validate(), Error);
    c = InversionConfig{};
    c.t_min = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("master transform basic properties") {
    const AnalyticModel am(brownian_sp());
    const double v = 1.0 * master_L(am, Complex(1.0, 0.0), 0.0, 0.0).real();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    // From Exp(2) the hitting time of 0 has E exp(-theta T) = 2 / (1 + sqrt(1 + 2 theta)).
    for (double th : {0.01, 1.0, 37.0, 1e8}) {
        const double exact = 1.0 - 2.0 / (1.0 + std::sqrt(1.0 + 2.0 * th));
        CHECK(th * master_L(am, Complex(th, 0.0), 0.0, 0.0).real() == doctest::Approx(exact).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)master_L(am, Complex(-0.6, 0.0), 0.0, 0.0), Error);
}

TEST_CASE("theta L(theta; 0, 0) increases to P(T > 0) on a log grid") {
    // theta L = P(T > 0) - E[exp(-theta T); T > 0]. The Brownian workload has
    // no atom at 0, so the limit is 1; compound Poisson starts empty with
    // probability 1 - rho and the limit is rho.
    struct Case {
        LevyModel model;
        double limit;
    };
    for (const auto& c : {Case{brownian_sp(), 1.0}, Case{testing::brownian_sn(), 1.0}, Case{me2(), 2.0 / 3.0},
                          Case{LevyModel::cp_erlang(1.0, 3, 5.0), 0.6}}) {
        const AnalyticModel am(c.model);
        double prev = 0.0;
        for (int k = 0; k <= 60; ++k) {
            const double th = std::pow(10.0, -2.0 + 0.1 * k);
            const double v = th * master_L(am, Complex(th, 0.0), 0.0, 0.0).real();
            CHECK(v > prev);
            CHECK(v < 1.0);
            prev = v;
        }
        CHECK(prev < c.limit);
        const double far = 1e10 * master_L(am, Complex(1e10, 0.0), 0.0, 0.0).real();
        CHECK(far == doctest::Approx(c.limit).epsilon(1e-4));
    }
}

TEST_CASE("master transform is smooth through its removable point") {
    // Outer denominator vanishes at theta = psi(beta) for the SP form.
    for (const auto& model : {brownian_sp(), me2()}) {
        const AnalyticModel am(model);
        const double beta = 0.8;
        const double th0 = psi_eval(model, beta);
        const double a = 0.4;
        const double at = master_L(am, Complex(th0, 0.0), a, beta).real();
        const double left = master_L(am, Complex(th0 - 1e-3, 0.0), a, beta).real();
        const double right = master_L(am, Complex(th0 + 1e-3, 0.0), a, beta).real();
        CHECK(at == doctest::Approx(0.5 * (left + right)).epsilon(1e-5));
        const Complex off = master_L(am, Complex(th0, 1e-9), a, beta);
        CHECK(off.real() == doctest::Approx(at).epsilon(1e-6));
    }
}

TEST_CASE("inverted survival matches the exact Brownian first-passage integral") {
    const AnalyticModel am(brownian_sp());
    const std::vector<double> times{0.01, 0.5, 2.0, 5.0, 10.0, 30.0, 60.0};
    const TransformGrid g = invert_time(am, 0.0, 0.0, times, InversionConfig{});
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(g.survival[i] == doctest::Approx(testing::brownian_survival(times[i])).epsilon(1e-6));
        CHECK(g.conditional[i] == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("time-domain invariants") {
    for (const auto& model : {brownian_sp(), me2(), LevyModel::cp_erlang(2.0, 2, 9.0)}) {
        const AnalyticModel am(model);
        std::vector<double> times;
        for (int k = 0; k < 25; ++k) times.push_back(0.05 * std::pow(1.35, k));
        const TransformGrid g = invert_time(am, 1.0, 1.0, times, InversionConfig{});
        for (std::size_t i = 0; i < times.size(); ++i) {
            CHECK(g.survival[i] > 0.0);
            CHECK(g.survival[i] <= 1.0);
            CHECK(g.conditional[i] > 0.0);
            CHECK(g.conditional[i] <= 1.0);
            CHECK(g.raw[i] <= g.survival[i]);
            if (i > 0) CHECK(g.survival[i] <= g.survival[i - 1]);
        }
    }
}

TEST_CASE("invert_time rejects bad grids") {
    const AnalyticModel am(brownian_sp());
    CHECK_THROWS_AS((void)invert_time(am, 0.0, 0.0, {1e-4}, InversionConfig{}), Error);
    CHECK_THROWS_AS((void)invert_time(am, 0.0, 0.0, {2.0, 1.0}, InversionConfig{}), Error);
}

TEST_CASE("Tauberian tail") {
    const AnalyticModel am(brownian_sp());
    // The leading term is positive for every t; the second term is negative
    // and only becomes a small correction once t is well past C3 / C1.
    for (double t : {0.1, 1.0, 10.0, 30.0}) CHECK(tauberian_tail(am, 0.0, 0.0, t, false) > 0.0);
    for (double t : {10.0, 30.0, 100.0}) CHECK(tauberian_tail(am, 0.0, 0.0, t) > 0.0);
    CHECK(tauberian_tail(am, 0.0, 0.0, 1.0) < 0.0);
    const double t = 30.0;
    const double c1 = -4.0 * std::sqrt(2.0);
    const double c3 = -16.0 * std::sqrt(2.0);
    const double expect = std::exp(-0.5 * t) * (c1 / kGammaMinusHalf * std::pow(t, -1.5) +
                                                c3 / kGammaMinusThreeHalves * std::pow(t, -2.5));
    CHECK(tauberian_tail(am, 0.0, 0.0, t) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(kGammaMinusHalf == doctest::Approx(std::tgamma(-0.5)).epsilon(1e-15));
    CHECK(kGammaMinusThreeHalves == doctest::Approx(std::tgamma(-1.5)).epsilon(1e-15));
}

TEST_CASE("Tauberian ratio approaches 1 with a t^-2 remainder") {
    const AnalyticModel am(brownian_sp());
    for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{1.0, 1.0}}) {
        const std::vector<double> times{10.0, 20.0, 30.0, 60.0};
        const TransformGrid g = invert_time(am, a, b, times, InversionConfig{});
        double prev = INFINITY;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double d = std::abs(g.raw[i] / tauberian_tail(am, a, b, times[i]) - 1.0);
            CHECK(d < prev);
            prev = d;
        }
        // Doubling t from 30 to 60 shrinks the gap about fourfold.
        const double d30 = std::abs(g.raw[2] / tauberian_tail(am, a, b, 30.0) - 1.0);
        const double d60 = std::abs(g.raw[3] / tauberian_tail(am, a, b, 60.0) - 1.0);
        CHECK(d30 / d60 > 3.0);
        CHECK(d30 / d60 < 5.0);
    }
}

TEST_CASE("log survival has the slope of the branch-point asymptotics") {
    const AnalyticModel am(brownian_sp());
    const double t = 40.0;
    const double h = 0.5;
    const TransformGrid g = invert_time(am, 0.0, 0.0, {t - h, t + h}, InversionConfig{});
    const double slope = (std::log(g.survival[1]) - std::log(g.survival[0])) / (2.0 * h);
    CHECK(slope == doctest::Approx(-0.5 - 1.5 / t).epsilon(0.05));
}

TEST_CASE("rate profile") {
    const AnalyticModel am(brownian_sp());
    const RateProfile zero = rate_profile(am, 0.0, 0.0, {5.0, 10.0, 20.0}, InversionConfig{});
    for (const auto& p : zero.points) CHECK(std::abs(p.profile) < 1e-12);
    const RateProfile rp = rate_profile(am, 1.0, 1.0, {10.0, 20.0, 40.0, 80.0}, InversionConfig{});
    const double c1 = reference::brownian_c1(0.0, 0.0);
    const double direct = (reference::brownian_c3(1.0, 1.0) - 0.0625 * reference::brownian_c3(0.0, 0.0)) / c1;
    CHECK(rp.published_limit == doctest::Approx(direct).epsilon(1e-13));
    CHECK(rp.predicted_limit == doctest::Approx(kGammaMinusHalf / kGammaMinusThreeHalves * direct).epsilon(1e-13));
    // Profile gaps to the predicted limit shrink like 1/t.
    for (std::size_t i = 1; i < rp.points.size(); ++i) {
        const double prev = std::abs(rp.points[i - 1].profile - rp.predicted_limit);
        const double cur = std::abs(rp.points[i].profile - rp.predicted_limit);
        CHECK(cur < 0.65 * prev);
    }
}

TEST_CASE("2D density inversion for Brownian") {
    const AnalyticModel am(brownian_sp());
    const std::vector<double> x{0.2, 0.9, 2.0, 4.0};
    const std::vector<double> y{0.3, 1.1, 3.5};
    const DensityGrid mu = invert_2d_density(am, DensityKind::Mu, x, y, InversionConfig{});
    const DensityGrid xi = invert_2d_density(am, DensityKind::Xi, x, y, InversionConfig{});
    CHECK(mu.all_converged());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            CHECK(mu.at(i, j) == doctest::Approx(x[i] * std::exp(-x[i]) * y[j] * std::exp(-y[j])).epsilon(1e-6));
            CHECK(std::abs(xi.at(i, j) - reference::brownian_xi_density(x[i], y[j])) < 1e-6);
        }
    }
}

TEST_CASE("density normalisation") {
    const AnalyticModel am(brownian_sp());
    // Simpson's rule on [0, 20]^2; the inversion is only needed away from 0,
    // where the density vanishes linearly in each coordinate anyway.
    const int n = 80;
    const double h = 20.0 / n;
    std::vector<double> g;
    std::vector<double> w;
    for (int k = 0; k <= n; ++k) {
        g.push_back(k == 0 ? 1e-3 : k * h);
        w.push_back(h / 3.0 * (k == 0 || k == n ? 1.0 : (k % 2 ? 4.0 : 2.0)));
    }
    const DensityGrid mu = invert_2d_density(am, DensityKind::Mu, g, g, InversionConfig{});
    double total = 0.0;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) total += w[i] * w[j] * mu.at(i, j);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("grid results do not depend on the thread count") {
    const AnalyticModel am(me2());
    InversionConfig one;
    InversionConfig three;
    three.threads = 3;
    const std::vector<double> times{1.0, 2.0, 4.0, 8.0, 16.0};
    const TransformGrid a = invert_time(am, 0.5, 0.5, times, one);
    const TransformGrid b = invert_time(am, 0.5, 0.5, times, three);
    CHECK(a.raw == b.raw);
    CHECK(a.survival == b.survival);
    const std::vector<double> x{0.5, 1.0, 2.0};
    const DensityGrid d1 = invert_2d_density(AnalyticModel(brownian_sp()), DensityKind::Mu, x, x, one);
    const DensityGrid d3 = invert_2d_density(AnalyticModel(brownian_sp()), DensityKind::Mu, x, x, three);
    CHECK(d1.values == d3.values);
}

TEST_CASE("2D density needs complex evaluation") {
    GenericExponent g;
    g.psi = [](double x) { return 0.5 * x * x + x; };
    g.derivs = {[](double x) { return x + 1.0; }, [](double) { return 1.0; }, [](double) { return 0.0; },
                [](double) { return 0.0; }};
    g.analyticity_asserted = true;
    const AnalyticModel am(LevyModel::generic(Kind::SpectrallyPositive, g));
    CHECK_THROWS_AS((void)invert_2d_density(am, DensityKind::Mu, {1.0}, {1.0}, InversionConfig{}), Error);
    // Real-axis quantities still work.
    CHECK(mu_tilde(am, 1.0, 1.0) == doctest::Approx(0.0625).epsilon(1e-10));
}
