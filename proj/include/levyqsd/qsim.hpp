#pragma once

#include <cstdint>
#include <vector>

#include "levyqsd/expansion.hpp"
#include "levyqsd/levy_model.hpp"
#include "levyqsd/rng.hpp"
#include "levyqsd/transform_lab.hpp"

namespace levyqsd {

enum class Tilt { None, ThetaStar };
enum class StreamMode { PerReplicationSubstream };

struct SimConfig {
    LevyModel model;
    double horizon = 10.0;
    std::uint64_t replications = 100000;
    std::uint64_t seed = 1;
    Tilt tilt = Tilt::None;
    /// Time step of the Brownian scheme; must not exceed horizon / 100.
    double brownian_step = 1e-3;
    StreamMode stream_mode = StreamMode::PerReplicationSubstream;
    /// 0 = hardware concurrency. Estimates do not depend on it.
    unsigned threads = 1;

    /// Throws DomainError when an invariant fails.
    void validate() const;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    /// (sum w)^2 / sum w^2 over replications with non-zero weight.
    double n_effective = 0.0;
    std::uint64_t replications = 0;
    std::uint64_t seed = 0;
};

/// Draw from the stationary workload law (the all-time supremum of X).
/// Brownian: Exp(2c / sigma^2). Compound Poisson: Pollaczek-Khinchine
/// geometric sum of equilibrium-excess draws. Throws Unsupported for generic
/// models.
[[nodiscard]] double sample_stationary(const LevyModel& model, Rng& rng);

struct BusyOutcome {
    bool survived = false;
    /// Workload at the horizon (meaningful only if survived).
    double q_t = 0.0;
    /// Time the workload reached 0 (meaningful only if not survived).
    double hit_time = 0.0;
};

/// Free evolution q0 + X(s) up to the horizon or the first hit of 0.
/// Compound Poisson is simulated event by event; Brownian uses exact Gaussian
/// increments on a grid of width `brownian_step` with the bridge hit
/// probability exp(-2ab / (sigma^2 dt)) between grid points.
[[nodiscard]] BusyOutcome simulate_busy(const LevyModel& model, double q0, double t, Rng& rng,
                                        double brownian_step = 1e-3);

/// Same, recording the state at each checkpoint (increasing, positive).
/// After a hit, later checkpoints report survived = false.
[[nodiscard]] std::vector<BusyOutcome> simulate_busy_path(const LevyModel& model, double q0,
                                                          const std::vector<double>& checkpoints, Rng& rng,
                                                          double brownian_step = 1e-3);

/// Reflected workload Q(t) started from q0 >= 0.
[[nodiscard]] double simulate_reflected(const LevyModel& model, double q0, double t, Rng& rng,
                                        double brownian_step = 1e-3);

/// Law of X under the exponential change of measure at the critical point:
/// drift zero, same kind. Throws Unsupported for generic models.
[[nodiscard]] LevyModel tilted_dynamics(const LevyModel& model);

/// Likelihood-ratio ingredients: the tilted path has weight
/// exp(-tilt * (X(t) - X(0)) + zeta* t).
struct TiltParameters {
    double tilt = 0.0;
    double zeta_star = 0.0;
};
[[nodiscard]] TiltParameters tilt_parameters(const LevyModel& model);

/// P_pi(T > horizon).
[[nodiscard]] Estimate estimate_survival(const SimConfig& config);

/// E_pi[exp(-alpha Q(0) - beta Q(t)) | T > t] at t = horizon, by the ratio
/// estimator with a delta-method standard error. Throws DegenerateSample if
/// no replication survives.
[[nodiscard]] Estimate estimate_conditional_transform(const SimConfig& config, double alpha, double beta);

struct StudyRow {
    double t = 0.0;
    Estimate survival;
    Estimate conditional;
    double analytic_survival = 0.0;
    double analytic_conditional = 0.0;
    /// t (simulated conditional - mu~) and its standard error.
    double profile = 0.0;
    double profile_std_error = 0.0;
    /// t (analytic conditional - mu~).
    double analytic_profile = 0.0;
};

struct ConvergenceStudy {
    std::vector<StudyRow> rows;
    double mu_tilde = 0.0;
    double xi_tilde = 0.0;
    double predicted_limit = 0.0;
    double published_limit = 0.0;
};

/// One long path per replication checkpointed at each grid time (common
/// random numbers across times), paired with the inversion values.
/// config.horizon is ignored in favour of the grid.
[[nodiscard]] ConvergenceStudy convergence_study(const SimConfig& config, double alpha, double beta,
                                                 const std::vector<double>& time_grid,
                                                 const InversionConfig& inversion = {});

}  // namespace levyqsd
