#include "levyqsd/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levyqsd/error.hpp"
#include "levyqsd/exponent.hpp"
#include "levyqsd/parallel.hpp"

namespace levyqsd {

namespace {

constexpr std::uint64_t kChunk = 1024;

/// X(t) = sum of jumps + drift t + sigma B(t), read off the family.
struct Netput {
    bool jumps = false;
    double lambda = 0.0;
    int shape = 1;
    double nu = 1.0;
    double sigma = 0.0;
    double drift = 0.0;
};

Netput netput_of(const LevyModel& model) {
    if (const auto* cp = std::get_if<CompoundPoissonErlang>(&model.family())) {
        return Netput{true, cp->lambda, cp->shape, cp->nu, 0.0, -1.0};
    }
    if (const auto* b = std::get_if<LinearBrownian>(&model.family())) {
        return Netput{false, 0.0, 1, 1.0, b->sigma, -b->c};
    }
    throw Error(ErrorCode::Unsupported, "no simulation recipe for generic exponents");
}

/// Uniform grid of steps of width at most `step` covering [from, to].
struct StepGrid {
    std::uint64_t count;
    double dt;
};

StepGrid steps_between(double from, double to, double step) {
    const double span = to - from;
    if (!(span > 0.0)) return {0, 0.0};
    auto n = static_cast<std::uint64_t>(std::ceil(span / step - 1e-9));
    n = std::max<std::uint64_t>(n, 1);
    return {n, span / static_cast<double>(n)};
}

void check_checkpoints(const std::vector<double>& cps) {
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (!(cps[i] > 0.0) || (i > 0 && !(cps[i] > cps[i - 1]))) {
            throw Error(ErrorCode::DomainError, "checkpoints must be positive and increasing");
        }
    }
}

std::vector<BusyOutcome> busy_path_unchecked(const Netput& x, double q0, const std::vector<double>& cps, Rng& rng,
                                             double step) {
    std::vector<BusyOutcome> out(cps.size());
    std::size_t idx = 0;
    auto kill_rest = [&](double hit) {
        for (; idx < cps.size(); ++idx) out[idx] = BusyOutcome{false, 0.0, hit};
    };

    double cur = 0.0;
    double q = q0;
    if (x.jumps) {
        while (idx < cps.size()) {
            const double tau = rng.exponential(x.lambda);
            const double next = cur + tau;
            while (idx < cps.size() && cps[idx] <= next) {
                const double level = q - (cps[idx] - cur);
                if (level <= 0.0) {
                    kill_rest(cur + q);
                    return out;
                }
                out[idx++] = BusyOutcome{true, level, 0.0};
            }
            if (idx == cps.size()) break;
            if (q <= tau) {
                kill_rest(cur + q);
                return out;
            }
            q = q - tau + rng.erlang(x.shape, x.nu);
            cur = next;
        }
        return out;
    }

    const double s2 = x.sigma * x.sigma;
    for (; idx < cps.size();) {
        const StepGrid g = steps_between(cur, cps[idx], step);
        const double sd = x.sigma * std::sqrt(g.dt);
        for (std::uint64_t i = 0; i < g.count; ++i) {
            const double b = q + x.drift * g.dt + sd * rng.normal();
            const double u = rng.uniform();
            const double t_end = cur + static_cast<double>(i + 1) * g.dt;
            if (b <= 0.0 || u < std::exp(-2.0 * q * b / (s2 * g.dt))) {
                kill_rest(t_end);
                return out;
            }
            q = b;
        }
        cur = cps[idx];
        out[idx++] = BusyOutcome{true, q, 0.0};
    }
    return out;
}

}  // namespace

void SimConfig::validate() const {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error(ErrorCode::DomainError, "horizon must be > 0");
    if (replications < 1) throw Error(ErrorCode::DomainError, "replications must be >= 1");
    if (!(brownian_step > 0.0) || brownian_step > horizon / 100.0 * (1.0 + 1e-12)) {
        throw Error(ErrorCode::DomainError, "brownian_step must be in (0, horizon / 100]");
    }
}

double sample_stationary(const LevyModel& model, Rng& rng) {
    const Netput x = netput_of(model);
    if (x.jumps) {
        const double rho = x.lambda * x.shape / x.nu;
        if (!(rho < 1.0)) throw Error(ErrorCode::InvalidModel, "stationary law needs load < 1");
        const std::uint64_t n = rng.geometric_failures(rho);
        double sum = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            const int j = std::min(x.shape, 1 + static_cast<int>(rng.uniform() * x.shape));
            sum += rng.erlang(j, x.nu);
        }
        return sum;
    }
    if (!(x.drift < 0.0)) throw Error(ErrorCode::InvalidModel, "stationary law needs negative drift");
    return rng.exponential(-2.0 * x.drift / (x.sigma * x.sigma));
}

BusyOutcome simulate_busy(const LevyModel& model, double q0, double t, Rng& rng, double brownian_step) {
    return simulate_busy_path(model, q0, {t}, rng, brownian_step).front();
}

std::vector<BusyOutcome> simulate_busy_path(const LevyModel& model, double q0, const std::vector<double>& checkpoints,
                                            Rng& rng, double brownian_step) {
    if (!(q0 > 0.0)) throw Error(ErrorCode::InvalidInitial, "busy period needs q0 > 0");
    if (!(brownian_step > 0.0)) throw Error(ErrorCode::DomainError, "brownian_step must be > 0");
    check_checkpoints(checkpoints);
    return busy_path_unchecked(netput_of(model), q0, checkpoints, rng, brownian_step);
}

double simulate_reflected(const LevyModel& model, double q0, double t, Rng& rng, double brownian_step) {
    if (!(q0 >= 0.0)) throw Error(ErrorCode::InvalidInitial, "q0 must be >= 0");
    if (!(t > 0.0)) throw Error(ErrorCode::DomainError, "t must be > 0");
    const Netput x = netput_of(model);
    double q = q0;
    if (x.jumps) {
        double cur = 0.0;
        for (;;) {
            const double tau = rng.exponential(x.lambda);
            if (cur + tau >= t) return std::max(q - (t - cur), 0.0);
            q = std::max(q - tau, 0.0) + rng.erlang(x.shape, x.nu);
            cur += tau;
        }
    }
    // Per step: increment b and the bridge minimum m give Q' = max(q + b, b - m).
    const StepGrid g = steps_between(0.0, t, brownian_step);
    const double s2dt = x.sigma * x.sigma * g.dt;
    const double sd = std::sqrt(s2dt);
    for (std::uint64_t i = 0; i < g.count; ++i) {
        const double b = x.drift * g.dt + sd * rng.normal();
        const double m = 0.5 * (b - std::sqrt(b * b - 2.0 * s2dt * std::log(rng.uniform())));
        q = std::max(q + b, b - m);
    }
    return q;
}

TiltParameters tilt_parameters(const LevyModel& model) {
    if (model.is_generic()) throw Error(ErrorCode::Unsupported, "no tilted dynamics for generic exponents");
    const CriticalData crit = critical_point(model);
    const double tilt = model.kind() == Kind::SpectrallyNegative ? crit.theta_star : -crit.theta_star;
    return TiltParameters{tilt, crit.zeta_star};
}

LevyModel tilted_dynamics(const LevyModel& model) {
    const TiltParameters tp = tilt_parameters(model);
    if (const auto* cp = std::get_if<CompoundPoissonErlang>(&model.family())) {
        const double nu_t = cp->nu - tp.tilt;
        const double lambda_t = cp->lambda * std::pow(cp->nu / nu_t, cp->shape);
        return LevyModel::cp_erlang(lambda_t, cp->shape, nu_t);
    }
    const auto& b = std::get<LinearBrownian>(model.family());
    return LevyModel::brownian(model.kind(), b.sigma, 0.0);
}

namespace {

/// Weighted sums over replications for one checkpoint.
struct Sums {
    double sw = 0.0;
    double sw2 = 0.0;
    double swh = 0.0;
    double sw2h = 0.0;
    double sw2h2 = 0.0;
    std::uint64_t survivors = 0;

    void add(double w, double h) {
        sw += w;
        sw2 += w * w;
        swh += w * h;
        sw2h += w * w * h;
        sw2h2 += w * w * h * h;
        ++survivors;
    }
    void merge(const Sums& o) {
        sw += o.sw;
        sw2 += o.sw2;
        swh += o.swh;
        sw2h += o.sw2h;
        sw2h2 += o.sw2h2;
        survivors += o.survivors;
    }
};

std::vector<Sums> run_replications(const SimConfig& config, double alpha, double beta,
                                   const std::vector<double>& cps) {
    const LevyModel& base = config.model;
    const bool tilted = config.tilt == Tilt::ThetaStar;
    const LevyModel sim_model = tilted ? tilted_dynamics(base) : base;
    const TiltParameters tp = tilted ? tilt_parameters(base) : TiltParameters{};
    const Netput path_law = netput_of(sim_model);

    const std::uint64_t n = config.replications;
    const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::vector<Sums>> partial(chunks, std::vector<Sums>(cps.size()));

    parallel_for(static_cast<std::size_t>(chunks), config.threads, [&](std::size_t c) {
        auto& sums = partial[c];
        const std::uint64_t lo = c * kChunk;
        const std::uint64_t hi = std::min(n, lo + kChunk);
        for (std::uint64_t r = lo; r < hi; ++r) {
            Rng rng(config.seed, r);
            const double q0 = sample_stationary(base, rng);
            if (q0 <= 0.0) continue;  // the atom at 0 ends the busy period at once
            const auto path = busy_path_unchecked(path_law, q0, cps, rng, config.brownian_step);
            for (std::size_t k = 0; k < cps.size(); ++k) {
                if (!path[k].survived) break;
                const double qt = path[k].q_t;
                const double w = tilted ? std::exp(-tp.tilt * (qt - q0) + tp.zeta_star * cps[k]) : 1.0;
                const double h = (alpha == 0.0 && beta == 0.0) ? 1.0 : std::exp(-alpha * q0 - beta * qt);
                sums[k].add(w, h);
            }
        }
    });

    std::vector<Sums> total(cps.size());
    for (const auto& chunk : partial) {
        for (std::size_t k = 0; k < cps.size(); ++k) total[k].merge(chunk[k]);
    }
    return total;
}

Estimate survival_from(const Sums& s, const SimConfig& config) {
    const auto n = static_cast<double>(config.replications);
    Estimate e;
    e.replications = config.replications;
    e.seed = config.seed;
    e.value = s.sw / n;
    if (config.replications > 1) {
        const double var = std::max(0.0, (s.sw2 / n - e.value * e.value) * n / (n - 1.0));
        e.std_error = std::sqrt(var / n);
    }
    e.n_effective = s.sw2 > 0.0 ? s.sw * s.sw / s.sw2 : 0.0;
    return e;
}

Estimate conditional_from(const Sums& s, const SimConfig& config, double t) {
    if (s.survivors == 0 || !(s.sw > 0.0)) {
        std::ostringstream os;
        os << "no replication survived to t = " << t << " out of " << config.replications;
        throw Error(ErrorCode::DegenerateSample, os.str());
    }
    Estimate e;
    e.replications = config.replications;
    e.seed = config.seed;
    e.value = s.swh / s.sw;
    const double r = e.value;
    const double num = s.sw2h2 - 2.0 * r * s.sw2h + r * r * s.sw2;
    e.std_error = std::sqrt(std::max(0.0, num)) / s.sw;
    e.n_effective = s.sw * s.sw / s.sw2;
    return e;
}

}  // namespace

Estimate estimate_survival(const SimConfig& config) {
    config.validate();
    const auto sums = run_replications(config, 0.0, 0.0, {config.horizon});
    return survival_from(sums.front(), config);
}

Estimate estimate_conditional_transform(const SimConfig& config, double alpha, double beta) {
    config.validate();
    if (!(alpha >= 0.0 && beta >= 0.0)) throw Error(ErrorCode::DomainError, "alpha and beta must be >= 0");
    const auto sums = run_replications(config, alpha, beta, {config.horizon});
    return conditional_from(sums.front(), config, config.horizon);
}

ConvergenceStudy convergence_study(const SimConfig& config, double alpha, double beta,
                                   const std::vector<double>& time_grid, const InversionConfig& inversion) {
    if (time_grid.empty()) throw Error(ErrorCode::DomainError, "time grid must be non-empty");
    check_checkpoints(time_grid);
    SimConfig cfg = config;
    cfg.horizon = time_grid.back();
    cfg.validate();

    const AnalyticModel am(config.model);
    ConvergenceStudy study;
    study.mu_tilde = mu_tilde(am, alpha, beta);
    study.xi_tilde = xi_tilde(am, alpha, beta);
    study.published_limit = study.xi_tilde;
    study.predicted_limit = kGammaMinusHalf / kGammaMinusThreeHalves * study.xi_tilde;
    const TransformGrid analytic = invert_time(am, alpha, beta, time_grid, inversion);

    const auto sums = run_replications(cfg, alpha, beta, time_grid);
    const bool trivial = alpha == 0.0 && beta == 0.0;
    for (std::size_t k = 0; k < time_grid.size(); ++k) {
        StudyRow row;
        row.t = time_grid[k];
        row.survival = survival_from(sums[k], cfg);
        row.conditional = conditional_from(sums[k], cfg, row.t);
        row.analytic_survival = analytic.survival[k];
        row.analytic_conditional = analytic.conditional[k];
        row.profile = trivial ? 0.0 : row.t * (row.conditional.value - study.mu_tilde);
        row.profile_std_error = row.t * row.conditional.std_error;
        row.analytic_profile = trivial ? 0.0 : row.t * (row.analytic_conditional - study.mu_tilde);
        study.rows.push_back(row);
    }
    return study;
}

}  // namespace levyqsd
