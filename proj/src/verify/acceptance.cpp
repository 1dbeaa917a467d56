#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "levyqsd/error.hpp"
#include "levyqsd/expansion.hpp"
#include "levyqsd/io.hpp"
#include "levyqsd/qsim.hpp"
#include "levyqsd/rng.hpp"
#include "levyqsd/transform_lab.hpp"
#include "levyqsd/verify.hpp"
#include "verify/reference_forms.hpp"

namespace levyqsd::verify {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

double rel_err(double x, double ref) {
    if (ref == 0.0) return std::abs(x);
    return std::abs(x - ref) / std::abs(ref);
}

LevyModel brownian_sp() { return LevyModel::brownian(Kind::SpectrallyPositive, 1.0, 1.0); }
LevyModel erlang_example() { return LevyModel::cp_erlang(1.0, 2, 3.0); }

std::vector<double> unit_grid() { return io::linear_grid(0.0, 5.0, 10); }

}  // namespace

CriterionResult brownian_critical_point() {
    CriterionResult r{1, "Brownian critical point (theta*, zeta*) = (-1, -0.5)", false, {}, 0.0};
    const LevyModel m = brownian_sp();
    const auto t0 = Clock::now();
    const CriticalData c = critical_point(m);
    r.seconds = seconds_since(t0);
    const double e1 = std::abs(c.theta_star + 1.0);
    const double e2 = std::abs(c.zeta_star + 0.5);
    r.details.push_back(fmt("theta* = %.17g (err %.2e), zeta* = %.17g (err %.2e)", c.theta_star, e1, c.zeta_star, e2));
    r.details.push_back(fmt("runtime %.3g ms (limit 1 ms)", 1e3 * r.seconds));
    r.passed = e1 <= 1e-12 && e2 <= 1e-12 && r.seconds < 1e-3;
    return r;
}

CriterionResult brownian_c1_grid() {
    CriterionResult r{2, "Brownian C1 on a 10x10 grid over [0,5]^2", false, {}, 0.0};
    const auto t0 = Clock::now();
    const AnalyticModel am(brownian_sp());
    double worst = 0.0;
    for (double a : unit_grid()) {
        for (double b : unit_grid()) {
            worst = std::max(worst, rel_err(joint_coeffs(am, a, b).c1, reference::brownian_c1(a, b)));
        }
    }
    r.seconds = seconds_since(t0);
    r.details.push_back(fmt("max relative error %.3e (limit 1e-10)", worst));
    r.details.push_back(fmt("runtime %.3g ms (limit 10 ms)", 1e3 * r.seconds));
    r.passed = worst <= 1e-10 && r.seconds < 1e-2;
    return r;
}

CriterionResult brownian_mu_xi_grid() {
    CriterionResult r{3, "Brownian mu~ and xi~ closed forms on the same grid", false, {}, 0.0};
    const auto t0 = Clock::now();
    const AnalyticModel am(brownian_sp());
    double worst_mu = 0.0;
    double worst_xi = 0.0;
    bool zero_ok = true;
    for (double a : unit_grid()) {
        for (double b : unit_grid()) {
            worst_mu = std::max(worst_mu, rel_err(mu_tilde(am, a, b), reference::brownian_mu(a, b)));
            const double ref = reference::brownian_xi(a, b);
            const double xi = xi_tilde(am, a, b);
            if (ref == 0.0) {
                zero_ok = zero_ok && std::abs(xi) <= 1e-12;
            } else {
                worst_xi = std::max(worst_xi, rel_err(xi, ref));
            }
        }
    }
    r.seconds = seconds_since(t0);
    r.details.push_back(fmt("mu~ max relative error %.3e, xi~ max relative error %.3e (limit 1e-10)", worst_mu,
                            worst_xi));
    r.details.push_back(std::string("xi~(0,0) = 0 within 1e-12: ") + (zero_ok ? "yes" : "no"));
    r.passed = worst_mu <= 1e-10 && worst_xi <= 1e-10 && zero_ok;
    return r;
}

CriterionResult erlang2_reference_forms() {
    CriterionResult r{4, "M/E(2,3)/1 with lambda=1: mu~ and xi~ against the published closed forms", false, {}, 0.0};
    const auto t0 = Clock::now();
    const AnalyticModel am(erlang_example());
    const SeriesConstants legacy = legacy_series_constants(am.critical());
    const JointExpansion legacy00 = joint_coeffs(am, legacy, 0.0, 0.0);
    Rng rng(20240917, 4);
    double worst_mu = 0.0;
    double worst_xi = 0.0;
    double worst_xi_legacy = 0.0;
    double xi_vs_c1 = 0.0;
    double c3_vs_legacy = 0.0;
    double c1_display = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double a = 4.0 * rng.uniform();
        const double b = 4.0 * rng.uniform();
        const double mu = mu_tilde(am, a, b);
        const double xi = xi_tilde(am, a, b);
        const double xi_ref = reference::erlang2_xi_display(a, b);
        worst_mu = std::max(worst_mu, rel_err(mu, reference::erlang2_mu_display(a, b)));
        worst_xi = std::max(worst_xi, rel_err(xi, xi_ref));

        const JointExpansion jc = joint_coeffs(am, a, b);
        c1_display = std::max(c1_display, rel_err(jc.c1, reference::erlang2_c1_display(1.0, 3.0, a, b)));
        const JointExpansion lc = joint_coeffs(am, legacy, a, b);
        c3_vs_legacy = std::max(c3_vs_legacy, rel_err(reference::erlang2_c3_display(1.0, 3.0, a, b), lc.c3));
        const double xi_legacy = (lc.c3 - mu * legacy00.c3) / legacy00.c1;
        worst_xi_legacy = std::max(worst_xi_legacy, rel_err(xi_legacy, xi_ref));
        xi_vs_c1 = std::max(xi_vs_c1, rel_err(xi_ref, reference::erlang2_c1_display(1.0, 3.0, a, b)));
    }
    r.seconds = seconds_since(t0);
    r.details.push_back(fmt("mu~ max relative error %.3e (limit 1e-8)", worst_mu));
    r.details.push_back(fmt("xi~ max relative error %.3e (limit 1e-8)", worst_xi));
    r.details.push_back(fmt("review: C1 agrees with the published C1 form to %.1e", c1_display));
    r.details.push_back(fmt("review: the published I1/I2 form equals the published C1 form to %.1e, so it is not "
                            "a xi~ expression (it is nonzero at (0,0), where xi~ must vanish)",
                            xi_vs_c1));
    r.details.push_back(fmt("review: the published C3 form matches the coefficient formulas evaluated with the "
                            "uncorrected series constants to %.1e",
                            c3_vs_legacy));
    r.details.push_back(fmt("review: xi~ built from those uncorrected constants still misses I1/I2 by %.3e",
                            worst_xi_legacy));
    r.passed = worst_mu <= 1e-8 && worst_xi <= 1e-8;
    return r;
}

CriterionResult expansion_vs_transform() {
    CriterionResult r{5, "Expansion vs transform: residual / h^{3/2} decreasing over h = 1e-2..1e-5", true, {}, 0.0};
    const auto t0 = Clock::now();
    const std::vector<std::pair<const char*, LevyModel>> models{{"brownian", brownian_sp()},
                                                                {"cp_erlang(1,2,3)", erlang_example()}};
    const std::vector<std::pair<double, double>> points{{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.5}};
    for (const auto& [name, model] : models) {
        const AnalyticModel am(model);
        for (const auto& [a, b] : points) {
            const JointExpansion jc = joint_coeffs(am, a, b);
            std::string line = fmt("%s (%g,%g):", name, a, b);
            double prev = std::numeric_limits<double>::infinity();
            bool mono = true;
            for (int j = 2; j <= 5; ++j) {
                const double h = std::pow(10.0, -j);
                const double l = master_L(am, Complex(am.critical().zeta_star + h, 0.0), a, b).real();
                const double ratio = std::abs(l - jc.partial_sum(h)) / std::pow(h, 1.5);
                line += fmt(" %.3e", ratio);
                mono = mono && ratio < prev;
                prev = ratio;
            }
            line += mono ? "  decreasing" : "  NOT decreasing";
            r.details.push_back(line);
            r.passed = r.passed && mono;
        }
    }
    r.seconds = seconds_since(t0);
    return r;
}

namespace {

/// P(T > t) for X = B - t started from Exp(2): first-passage formula
/// integrated against the stationary law with composite Gauss-Legendre.
double brownian_exact_survival(double t) {
    const double st = std::sqrt(t);
    auto ncdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    auto integrand = [&](double x) {
        return 2.0 * std::exp(-2.0 * x) * (ncdf((x - t) / st) - std::exp(2.0 * x) * ncdf((-x - t) / st));
    };
    // 8-point rule on many panels.
    static const double xg[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
    static const double wg[4] = {0.3626837833783620, 0.3137066254239386, 0.2223810344533745, 0.1012285362903763};
    const double upper = 3.0 * t + 40.0;
    const int panels = 4000;
    const double hw = 0.5 * upper / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = (2 * p + 1) * hw;
        for (int k = 0; k < 4; ++k) {
            sum += wg[k] * hw * (integrand(mid - hw * xg[k]) + integrand(mid + hw * xg[k]));
        }
    }
    return sum;
}

}  // namespace

CriterionResult tauberian_agreement() {
    CriterionResult r{6, "Tauberian agreement for Brownian at t = 20 (<= 0.05) and t = 30 (<= 0.02)", true, {}, 0.0};
    const auto t0 = Clock::now();
    const AnalyticModel am(brownian_sp());
    const InversionConfig cfg;
    for (const auto& [a, b] : std::vector<std::pair<double, double>>{{0.0, 0.0}, {1.0, 1.0}}) {
        const TransformGrid g = invert_time(am, a, b, {20.0, 30.0}, cfg);
        const double d20 = std::abs(g.raw[0] / tauberian_tail(am, a, b, 20.0) - 1.0);
        const double d30 = std::abs(g.raw[1] / tauberian_tail(am, a, b, 30.0) - 1.0);
        const bool ok = d20 <= 0.05 && d30 <= 0.02;
        r.details.push_back(fmt("(%g,%g): |raw/tail - 1| = %.4f at t=20, %.4f at t=30%s", a, b, d20, d30,
                                ok ? "" : "  outside tolerance"));
        r.passed = r.passed && ok;
    }
    for (double t : {20.0, 30.0}) {
        const TransformGrid g = invert_time(am, 0.0, 0.0, {t}, cfg);
        const double exact = brownian_exact_survival(t);
        r.details.push_back(fmt("check: inverted survival at t=%g vs first-passage integral: relative diff %.2e", t,
                                std::abs(g.survival[0] / exact - 1.0)));
    }
    r.details.push_back("note: at (0,0) the neglected t^{-7/2} term is still ~5% of the tail at t=30; the "
                        "inversion itself is accurate, as the integral check shows");
    r.seconds = seconds_since(t0);
    r.details.push_back(fmt("runtime %.3g s (limit 5 s)", r.seconds));
    r.passed = r.passed && r.seconds < 5.0;
    return r;
}

CriterionResult rate_law() {
    CriterionResult r{7, "Rate law: Brownian (1,1) profile approaches (C3 - mu~ C3(0,0)) / C1(0,0)", false, {}, 0.0};
    const auto t0 = Clock::now();
    const AnalyticModel am(brownian_sp());
    const RateProfile rp = rate_profile(am, 1.0, 1.0, {10.0, 20.0, 40.0}, InversionConfig{});
    const double p10 = rp.points[0].profile;
    const double p40 = rp.points[2].profile;
    std::string line = "profile:";
    for (const auto& p : rp.points) line += fmt(" t=%g %.6f", p.t, p.profile);
    r.details.push_back(line);
    const double lim = rp.published_limit;
    r.details.push_back(fmt("stated limit %.6f: |p(40) - L| = %.4f vs 0.5 |p(10) - L| = %.4f", lim,
                            std::abs(p40 - lim), 0.5 * std::abs(p10 - lim)));
    r.passed = std::abs(p40 - lim) < 0.5 * std::abs(p10 - lim);
    const double g = rp.predicted_limit;
    const bool corrected = std::abs(p40 - g) < 0.5 * std::abs(p10 - g);
    r.details.push_back(fmt("note: the two-term tail gives the limit Gamma(-1/2)/Gamma(-3/2) * %.6f = %.6f; "
                            "against it |p(40) - L| = %.4f vs 0.5 |p(10) - L| = %.4f (%s)",
                            lim, g, std::abs(p40 - g), 0.5 * std::abs(p10 - g), corrected ? "holds" : "fails"));
    r.seconds = seconds_since(t0);
    return r;
}

CriterionResult simulation_cross_check(const VerifyOptions& options) {
    CriterionResult r{8, "Simulation: tilted survival at t=10 and tilted/untilted agreement at t=5", false, {}, 0.0};
    const auto t0 = Clock::now();
    const LevyModel m = brownian_sp();
    const AnalyticModel am(m);
    const double target = invert_time(am, 0.0, 0.0, {10.0}, InversionConfig{}).survival[0];

    SimConfig c10{m, 10.0, options.replications, options.seed, Tilt::ThetaStar, 0.1};
    c10.threads = options.threads;
    const Estimate e10 = estimate_survival(c10);
    const double z10 = (e10.value - target) / e10.std_error;
    r.details.push_back(fmt("t=10 tilted: %.6e +- %.2e (n_eff %.0f) vs inversion %.6e, z = %.2f", e10.value,
                            e10.std_error, e10.n_effective, target, z10));

    SimConfig c5{m, 5.0, options.replications, options.seed + 1, Tilt::None, 0.05};
    c5.threads = options.threads;
    const Estimate plain = estimate_survival(c5);
    c5.tilt = Tilt::ThetaStar;
    c5.seed = options.seed + 2;
    const Estimate tilted = estimate_survival(c5);
    const double se = std::hypot(plain.std_error, tilted.std_error);
    const double z5 = (plain.value - tilted.value) / se;
    r.details.push_back(fmt("t=5: untilted %.6e +- %.2e, tilted %.6e +- %.2e, z = %.2f", plain.value,
                            plain.std_error, tilted.value, tilted.std_error, z5));
    r.seconds = seconds_since(t0);
    r.details.push_back(fmt("%llu replications per estimate, runtime %.3g s (limit 120 s)",
                            static_cast<unsigned long long>(options.replications), r.seconds));
    r.passed = std::abs(z10) <= 3.0 && std::abs(z5) <= 3.0 && r.seconds < 120.0;
    return r;
}

CriterionResult density_inversion(const VerifyOptions& options) {
    CriterionResult r{9, "Brownian 2D density inversion of mu~ (1e-4 rel) and xi~ (1e-3 abs) on [0.2,4]^2", false,
                      {}, 0.0};
    const auto t0 = Clock::now();
    const AnalyticModel am(brownian_sp());
    const std::vector<double> grid = io::linear_grid(0.2, 4.0, 12);
    InversionConfig cfg;
    cfg.threads = options.threads;
    const DensityGrid mu = invert_2d_density(am, DensityKind::Mu, grid, grid, cfg);
    const DensityGrid xi = invert_2d_density(am, DensityKind::Xi, grid, grid, cfg);
    double worst_mu = 0.0;
    double worst_xi = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            worst_mu = std::max(worst_mu, rel_err(mu.at(i, j), reference::brownian_mu_density(grid[i], grid[j])));
            worst_xi = std::max(worst_xi, std::abs(xi.at(i, j) - reference::brownian_xi_density(grid[i], grid[j])));
        }
    }
    r.details.push_back(fmt("mu: max relative error %.3e over %zu points", worst_mu, grid.size() * grid.size()));
    r.details.push_back(fmt("xi: max absolute error %.3e", worst_xi));
    r.details.push_back(std::string("all points converged: ") +
                        (mu.all_converged() && xi.all_converged() ? "yes" : "no"));
    r.seconds = seconds_since(t0);
    r.passed = worst_mu <= 1e-4 && worst_xi <= 1e-3;
    return r;
}

CriterionResult property_suite() {
    CriterionResult r{10, "Property suite on every built-in model and three extra parameter sets", true, {}, 0.0};
    const auto t0 = Clock::now();
    const std::vector<std::pair<std::string, LevyModel>> models{
        {"brownian sp(1,1)", brownian_sp()},
        {"brownian sn(1,1)", LevyModel::brownian(Kind::SpectrallyNegative, 1.0, 1.0)},
        {"cp_erlang(1,2,3)", erlang_example()},
        {"cp_erlang(0.5,2,2)", LevyModel::cp_erlang(0.5, 2, 2.0)},
        {"cp_erlang(1,3,5)", LevyModel::cp_erlang(1.0, 3, 5.0)},
        {"cp_erlang(2,2,9)", LevyModel::cp_erlang(2.0, 2, 9.0)},
    };
    const std::vector<double> thetas = io::log_grid(1e-2, 1e4, 25);
    const std::vector<double> times = io::log_grid(0.1, 50.0, 15);
    for (const auto& [name, model] : models) {
        std::vector<std::string> failed;
        try {
            const AnalyticModel am(model);
            const double mu00 = mu_tilde(am, 0.0, 0.0);
            if (!(std::abs(mu00 - 1.0) <= 1e-12)) failed.push_back(fmt("mu~(0,0) = %.17g", mu00));
            const double xi00 = xi_tilde(am, 0.0, 0.0);
            if (!(std::abs(xi00) <= 1e-12)) failed.push_back(fmt("xi~(0,0) = %.3e", xi00));

            double prev = 0.0;
            for (double th : thetas) {
                const double v = th * master_L(am, Complex(th, 0.0), 0.0, 0.0).real();
                if (!(v > 0.0 && v < 1.0) || v < prev) {
                    failed.push_back(fmt("theta L(theta) = %.6g at theta = %g", v, th));
                    break;
                }
                prev = v;
            }

            const TransformGrid g = invert_time(am, 0.0, 0.0, times, InversionConfig{});
            for (std::size_t i = 0; i < times.size(); ++i) {
                const double s = g.survival[i];
                if (!(s > 0.0 && s <= 1.0) || (i > 0 && s > g.survival[i - 1])) {
                    failed.push_back(fmt("survival %.6g at t = %g", s, times[i]));
                    break;
                }
            }

            const CriticalData& c = am.critical();
            double worst = 0.0;
            for (int k = 0; k <= 40; ++k) {
                const double eta = c.theta_star + 0.01 * (1.0 + std::abs(c.theta_star)) * std::pow(1.25, k);
                const double back = phi_right_inverse(model, c, psi_eval(model, eta));
                worst = std::max(worst, std::abs(back - eta) / std::max(1.0, std::abs(eta)));
            }
            if (!(worst <= 1e-10)) failed.push_back(fmt("Phi(psi(eta)) - eta up to %.2e", worst));
        } catch (const Error& e) {
            failed.emplace_back(e.what());
        }
        r.details.push_back(name + (failed.empty() ? ": all properties hold" : ": FAILED"));
        for (const auto& f : failed) r.details.push_back("  " + f);
        r.passed = r.passed && failed.empty();
    }
    r.seconds = seconds_since(t0);
    return r;
}

std::vector<CriterionResult> run_all(const VerifyOptions& options) {
    std::vector<CriterionResult> out;
    auto guarded = [&out](int id, const char* title, auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back(CriterionResult{id, title, false, {std::string("error: ") + e.what()}, 0.0});
        }
    };
    guarded(1, "Brownian critical point", [] { return brownian_critical_point(); });
    guarded(2, "Brownian C1 grid", [] { return brownian_c1_grid(); });
    guarded(3, "Brownian mu~ and xi~", [] { return brownian_mu_xi_grid(); });
    guarded(4, "M/E(2,3)/1 reference forms", [] { return erlang2_reference_forms(); });
    guarded(5, "Expansion vs transform", [] { return expansion_vs_transform(); });
    guarded(6, "Tauberian agreement", [] { return tauberian_agreement(); });
    guarded(7, "Rate law", [] { return rate_law(); });
    guarded(8, "Simulation cross-check", [&] { return simulation_cross_check(options); });
    guarded(9, "Density inversion", [&] { return density_inversion(options); });
    guarded(10, "Property suite", [] { return property_suite(); });
    return out;
}

void print_report(std::ostream& os, const std::vector<CriterionResult>& results) {
    int passed = 0;
    for (const auto& r : results) {
        os << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.title << fmt("  (%.3f s)", r.seconds) << '\n';
        for (const auto& d : r.details) os << "        " << d << '\n';
        passed += r.passed ? 1 : 0;
    }
    os << passed << " of " << results.size() << " criteria passed\n";
}

}  // namespace levyqsd::verify
