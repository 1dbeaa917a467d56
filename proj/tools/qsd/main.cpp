#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levyqsd/error.hpp"
#include "levyqsd/expansion.hpp"
#include "levyqsd/exponent.hpp"
#include "levyqsd/io.hpp"
#include "levyqsd/qsim.hpp"
#include "levyqsd/transform_lab.hpp"
#include "levyqsd/verify.hpp"

namespace fs = std::filesystem;
using levyqsd::io::json;
using levyqsd::io::format_double;

namespace {

enum Exit : int { kOk = 0, kCertification = 2, kNumerical = 3, kInput = 4 };

int exit_code_for(levyqsd::ErrorCode code) {
    using levyqsd::ErrorCode;
    switch (code) {
        case ErrorCode::NotCertified:
        case ErrorCode::NoInteriorMinimum:
        case ErrorCode::NotStrictlyNegative:
            return kCertification;
        case ErrorCode::IoError:
        case ErrorCode::SchemaError:
        case ErrorCode::InvalidModel:
            return kInput;
        default:
            return kNumerical;
    }
}

/// Flags shared by every subcommand. Anything given on the command line
/// overrides the matching field of --study.
struct Common {
    std::string model_file;
    std::string study_file;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::string times;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--model", c.model_file, "Model JSON file");
    cmd->add_option("--study", c.study_file, "Study JSON file (or a sidecar written by a previous run)");
    cmd->add_option("--alpha", c.alpha, "alpha >= 0");
    cmd->add_option("--beta", c.beta, "beta >= 0");
    cmd->add_option("--times", c.times, "Log-spaced time grid a:b:n");
    cmd->add_option("--out", c.out_dir, "Output directory");
    cmd->add_option("--seed", c.seed, "Simulation seed");
    cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores); results do not depend on it");
}

levyqsd::io::StudySpec resolve(const Common& c) {
    levyqsd::io::StudySpec s;
    if (!c.study_file.empty()) s = levyqsd::io::load_study(c.study_file);
    if (!c.model_file.empty()) s.model = levyqsd::io::read_json(c.model_file);
    if (s.model.is_null()) throw levyqsd::Error(levyqsd::ErrorCode::SchemaError, "no model given (--model or --study)");
    if (c.alpha || c.beta) {
        const double a = c.alpha.value_or(s.points.empty() ? 0.0 : s.points.front().first);
        const double b = c.beta.value_or(s.points.empty() ? 0.0 : s.points.front().second);
        s.points = {{a, b}};
    }
    if (!c.times.empty()) s.times = levyqsd::io::parse_log_grid(c.times);
    if (!c.out_dir.empty()) s.out_dir = c.out_dir;
    if (c.seed) s.simulation.seed = *c.seed;
    if (c.threads) s.threads = *c.threads;
    s.inversion.threads = s.threads;
    levyqsd::io::validate_study(s);
    return s;
}

void require_times(const levyqsd::io::StudySpec& s) {
    if (s.times.empty()) throw levyqsd::Error(levyqsd::ErrorCode::SchemaError, "time grid required (--times a:b:n)");
}

/// Writes rows to <out>/<name> and returns the file name.
class CsvFile {
public:
    CsvFile(const levyqsd::io::StudySpec& s, const std::string& name) : name_(name) {
        fs::create_directories(s.out_dir);
        path_ = fs::path(s.out_dir) / name;
        out_.open(path_);
        if (!out_) throw levyqsd::Error(levyqsd::ErrorCode::IoError, "cannot write " + path_.string());
    }
    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
        out_ << '\n';
    }
    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) out_ << (i ? "," : "") << format_double(vals[i]);
        out_ << '\n';
    }
    void close() {
        out_.close();
        if (!out_) throw levyqsd::Error(levyqsd::ErrorCode::IoError, "failed writing " + path_.string());
    }
    [[nodiscard]] const std::string& name() const { return name_; }

private:
    std::string name_;
    fs::path path_;
    std::ofstream out_;
};

std::string point_file(const std::string& stem, std::size_t index, std::size_t count) {
    return count == 1 ? stem + ".csv" : stem + "_" + std::to_string(index) + ".csv";
}

void write_sidecar(const levyqsd::io::StudySpec& s, const std::string& command, const json& outputs) {
    json doc;
    doc["command"] = command;
    doc["study"] = levyqsd::io::study_to_json(s);
    doc["outputs"] = outputs;
    fs::create_directories(s.out_dir);
    levyqsd::io::write_json(fs::path(s.out_dir) / (command + ".json"), doc);
}

json critical_json(const levyqsd::LevyModel& model, bool& certified) {
    const levyqsd::AssumptionReport rep = levyqsd::check_assumptions(model);
    certified = rep.certified();
    json out;
    out["model"] = model.describe();
    try {
        const levyqsd::CriticalData c = levyqsd::critical_point(model);
        out["theta_star"] = c.theta_star;
        out["zeta_star"] = c.zeta_star;
        out["psi_second"] = c.psi_dd;
        out["psi_third"] = c.psi_d3;
        out["psi_fourth"] = c.psi_d4;
    } catch (const levyqsd::Error& e) {
        out["theta_star"] = nullptr;
        out["zeta_star"] = nullptr;
        out["critical_error"] = e.what();
    }
    out["certified"] = certified;
    out["assumptions"] = {{"stable", rep.stable},
                          {"exponent_finite_on_window", rep.exponent_finite_on_window},
                          {"interior_minimum", rep.interior_minimum},
                          {"minimum_negative", rep.minimum_negative},
                          {"analyticity_documented", rep.analyticity_documented}};
    out["messages"] = rep.messages;
    return out;
}

int cmd_critical(const Common& c) {
    const auto s = resolve(c);
    const levyqsd::LevyModel model = levyqsd::io::model_from_json(s.model);
    bool certified = false;
    const json out = critical_json(model, certified);
    std::cout << out.dump(2) << '\n';
    if (!c.out_dir.empty()) write_sidecar(s, "critical", out);
    return certified ? kOk : kCertification;
}

json coeffs_json(const levyqsd::AnalyticModel& am, double a, double b) {
    const levyqsd::JointExpansion jc = levyqsd::joint_coeffs(am, a, b);
    const levyqsd::SeriesConstants& k = am.constants();
    json out;
    out["alpha"] = a;
    out["beta"] = b;
    out["theta_star"] = k.crit.theta_star;
    out["zeta_star"] = k.crit.zeta_star;
    out["A_or_B"] = {k.c1, k.c2, k.c3};
    out["C"] = {jc.c0, jc.c1, jc.c2, jc.c3};
    out["mu_tilde"] = levyqsd::mu_tilde(am, a, b);
    out["xi_tilde"] = levyqsd::xi_tilde(am, a, b);
    out["xi_tilde_unnormalized"] = levyqsd::xi_tilde_unnormalized(am, a, b);
    return out;
}

int cmd_coeffs(const Common& c) {
    const auto s = resolve(c);
    const levyqsd::AnalyticModel am(levyqsd::io::model_from_json(s.model));
    json results = json::array();
    for (const auto& [a, b] : s.points) results.push_back(coeffs_json(am, a, b));
    std::cout << (results.size() == 1 ? results[0] : results).dump(2) << '\n';
    if (!c.out_dir.empty()) write_sidecar(s, "coeffs", results);
    return kOk;
}

int cmd_transform(const Common& c, const std::vector<double>& thetas_flag, const std::vector<double>& offsets) {
    auto s = resolve(c);
    const levyqsd::AnalyticModel am(levyqsd::io::model_from_json(s.model));
    const double zeta = am.critical().zeta_star;
    if (!thetas_flag.empty()) s.thetas = thetas_flag;
    if (!offsets.empty()) {
        s.thetas.clear();
        for (double h : offsets) s.thetas.push_back(zeta + h);
    }
    if (s.thetas.empty()) {
        for (int j = 1; j <= 6; ++j) s.thetas.push_back(zeta + std::pow(10.0, -j));
        std::reverse(s.thetas.begin(), s.thetas.end());
    }
    json files = json::array();
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const auto [a, b] = s.points[i];
        const levyqsd::JointExpansion jc = levyqsd::joint_coeffs(am, a, b);
        CsvFile csv(s, point_file("transform", i, s.points.size()));
        csv.header({"theta", "h", "L", "expansion", "residual_ratio"});
        for (double th : s.thetas) {
            const double h = th - zeta;
            const double l = levyqsd::master_L(am, levyqsd::Complex(th, 0.0), a, b).real();
            const double e = jc.partial_sum(h);
            csv.row({th, h, l, e, std::abs(l - e) / std::pow(h, 1.5)});
        }
        csv.close();
        files.push_back({{"alpha", a}, {"beta", b}, {"csv", csv.name()}});
    }
    write_sidecar(s, "transform", {{"files", files}});
    std::cout << "wrote " << files.size() << " file(s) to " << s.out_dir << '\n';
    return kOk;
}

/// invert and rate-study share the table; rate-study adds the simulation overlay.
int cmd_profile(const Common& c, const std::string& command, bool allow_simulation) {
    const auto s = resolve(c);
    require_times(s);
    const levyqsd::LevyModel model = levyqsd::io::model_from_json(s.model);
    const levyqsd::AnalyticModel am(model);
    const bool simulate = allow_simulation && s.simulation.enabled;
    json files = json::array();
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const auto [a, b] = s.points[i];
        const levyqsd::RateProfile rp = levyqsd::rate_profile(am, a, b, s.times, s.inversion);
        std::optional<levyqsd::ConvergenceStudy> sim;
        if (simulate) {
            levyqsd::SimConfig cfg{model};
            cfg.replications = s.simulation.replications;
            cfg.seed = s.simulation.seed;
            cfg.tilt = s.simulation.tilt;
            cfg.brownian_step = s.simulation.brownian_step.value_or(s.times.front() / 100.0);
            cfg.threads = s.threads;
            sim = levyqsd::convergence_study(cfg, a, b, s.times, s.inversion);
        }
        CsvFile csv(s, point_file(command == "invert" ? "invert" : "rate_study", i, s.points.size()));
        std::vector<std::string> cols{"t", "raw", "survival", "conditional", "tauberian", "profile",
                                      "predicted_limit"};
        if (sim) {
            for (const char* col : {"sim_survival", "sim_survival_se", "sim_conditional", "sim_conditional_se",
                                    "sim_profile", "sim_profile_se", "n_effective"}) {
                cols.emplace_back(col);
            }
        }
        csv.header(cols);
        for (std::size_t k = 0; k < rp.points.size(); ++k) {
            const auto& p = rp.points[k];
            std::vector<double> row{p.t, p.raw, p.survival, p.conditional, p.tauberian, p.profile,
                                    rp.predicted_limit};
            if (sim) {
                const auto& r = sim->rows[k];
                row.insert(row.end(), {r.survival.value, r.survival.std_error, r.conditional.value,
                                       r.conditional.std_error, r.profile, r.profile_std_error,
                                       r.survival.n_effective});
            }
            csv.row(row);
        }
        csv.close();
        files.push_back({{"alpha", a},
                         {"beta", b},
                         {"csv", csv.name()},
                         {"mu_tilde", rp.mu_tilde},
                         {"xi_tilde", rp.xi_tilde},
                         {"predicted_limit", rp.predicted_limit},
                         {"published_limit", rp.published_limit}});
    }
    write_sidecar(s, command, {{"files", files}});
    std::cout << "wrote " << files.size() << " file(s) to " << s.out_dir << '\n';
    return kOk;
}

int cmd_density(const Common& c, const std::string& which) {
    auto s = resolve(c);
    if (!which.empty()) {
        if (which == "mu") {
            s.density = levyqsd::DensityKind::Mu;
        } else if (which == "xi") {
            s.density = levyqsd::DensityKind::Xi;
        } else {
            throw levyqsd::Error(levyqsd::ErrorCode::SchemaError, "--which must be mu or xi");
        }
    }
    if (s.x_grid.empty()) s.x_grid = levyqsd::io::linear_grid(0.2, 4.0, 20);
    if (s.y_grid.empty()) s.y_grid = s.x_grid;
    levyqsd::io::validate_study(s);
    const levyqsd::AnalyticModel am(levyqsd::io::model_from_json(s.model));
    const levyqsd::DensityGrid g = levyqsd::invert_2d_density(am, s.density, s.x_grid, s.y_grid, s.inversion);
    CsvFile csv(s, "density.csv");
    csv.header({"x", "y", "density"});
    json unconverged = json::array();
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        for (std::size_t j = 0; j < g.y.size(); ++j) {
            csv.row({g.x[i], g.y[j], g.at(i, j)});
            if (!g.converged[i * g.y.size() + j]) unconverged.push_back({g.x[i], g.y[j]});
        }
    }
    csv.close();
    write_sidecar(s, "density", {{"csv", csv.name()},
                                 {"which", std::string(levyqsd::io::to_string(s.density))},
                                 {"unconverged", unconverged}});
    std::cout << "wrote " << csv.name() << " to " << s.out_dir << " (" << unconverged.size()
              << " unconverged points)\n";
    return unconverged.empty() ? kOk : kNumerical;
}

int cmd_simulate(const Common& c, std::optional<std::uint64_t> reps, const std::string& tilt,
                 const std::string& quantity) {
    auto s = resolve(c);
    require_times(s);
    s.simulation.enabled = true;
    if (reps) s.simulation.replications = *reps;
    if (tilt == "none") {
        s.simulation.tilt = levyqsd::Tilt::None;
    } else if (tilt == "theta_star") {
        s.simulation.tilt = levyqsd::Tilt::ThetaStar;
    } else if (!tilt.empty()) {
        throw levyqsd::Error(levyqsd::ErrorCode::SchemaError, "--tilt must be none or theta_star");
    }
    if (quantity != "survival" && quantity != "conditional") {
        throw levyqsd::Error(levyqsd::ErrorCode::SchemaError, "--quantity must be survival or conditional");
    }
    const levyqsd::LevyModel model = levyqsd::io::model_from_json(s.model);
    levyqsd::SimConfig cfg{model};
    cfg.replications = s.simulation.replications;
    cfg.seed = s.simulation.seed;
    cfg.tilt = s.simulation.tilt;
    cfg.brownian_step = s.simulation.brownian_step.value_or(s.times.front() / 100.0);
    cfg.threads = s.threads;
    json files = json::array();
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const auto [a, b] = s.points[i];
        const levyqsd::ConvergenceStudy st = levyqsd::convergence_study(cfg, a, b, s.times, s.inversion);
        CsvFile csv(s, point_file("simulate", i, s.points.size()));
        csv.header({"t", "estimate", "std_error", "n_effective", "analytic", "profile"});
        for (const auto& r : st.rows) {
            const bool surv = quantity == "survival";
            const levyqsd::Estimate& e = surv ? r.survival : r.conditional;
            csv.row({r.t, e.value, e.std_error, e.n_effective, surv ? r.analytic_survival : r.analytic_conditional,
                     r.profile});
        }
        csv.close();
        files.push_back({{"alpha", a}, {"beta", b}, {"csv", csv.name()}, {"quantity", quantity}});
    }
    write_sidecar(s, "simulate", {{"files", files}});
    std::cout << "wrote " << files.size() << " file(s) to " << s.out_dir << '\n';
    return kOk;
}

int cmd_verify(const Common& c) {
    levyqsd::verify::VerifyOptions opt;
    if (c.threads) opt.threads = *c.threads;
    if (c.seed) opt.seed = *c.seed;
    const auto results = levyqsd::verify::run_all(opt);
    levyqsd::verify::print_report(std::cout, results);
    bool all = true;
    json rows = json::array();
    for (const auto& r : results) {
        all = all && r.passed;
        rows.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"seconds", r.seconds},
                        {"details", r.details}});
    }
    if (!c.out_dir.empty()) {
        fs::create_directories(c.out_dir);
        levyqsd::io::write_json(fs::path(c.out_dir) / "verify.json",
                                {{"command", "verify"},
                                 {"options", {{"threads", opt.threads}, {"seed", opt.seed},
                                              {"replications", opt.replications}}},
                                 {"results", rows}});
    }
    return all ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qsd: quasi-stationary analysis of spectrally one-sided Levy-driven queues"};
    app.require_subcommand(1);

    Common common;
    std::vector<double> thetas;
    std::vector<double> offsets;
    std::string which;
    std::optional<std::uint64_t> reps;
    std::string tilt;
    std::string quantity = "survival";

    auto* critical = app.add_subcommand("critical", "Critical point and assumption checks");
    auto* coeffs = app.add_subcommand("coeffs", "Series constants, C0..C3, mu~ and xi~ at (alpha, beta)");
    auto* transform = app.add_subcommand("transform", "Transform L near the branch point vs its expansion");
    auto* invert = app.add_subcommand("invert", "Numerical inversion on a time grid");
    auto* rate = app.add_subcommand("rate-study", "Rate profile t (conditional - mu~), optional simulation overlay");
    auto* density = app.add_subcommand("density", "2D density of mu or xi");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates on a time grid");
    auto* verify = app.add_subcommand("verify", "Run the acceptance suite and print a pass/fail table");
    for (auto* cmd : {critical, coeffs, transform, invert, rate, density, simulate, verify}) add_common(cmd, common);
    transform->add_option("--theta", thetas, "Real theta values (> zeta*)");
    transform->add_option("--offsets", offsets, "Offsets h, theta = zeta* + h");
    density->add_option("--which", which, "mu or xi");
    simulate->add_option("--replications", reps, "Replications");
    simulate->add_option("--tilt", tilt, "none or theta_star");
    simulate->add_option("--quantity", quantity, "survival or conditional");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInput;
    }

    try {
        if (critical->parsed()) return cmd_critical(common);
        if (coeffs->parsed()) return cmd_coeffs(common);
        if (transform->parsed()) return cmd_transform(common, thetas, offsets);
        if (invert->parsed()) return cmd_profile(common, "invert", false);
        if (rate->parsed()) return cmd_profile(common, "rate-study", true);
        if (density->parsed()) return cmd_density(common, which);
        if (simulate->parsed()) return cmd_simulate(common, reps, tilt, quantity);
        if (verify->parsed()) return cmd_verify(common);
    } catch (const levyqsd::Error& e) {
        std::cerr << "qsd: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const json::exception& e) {
        std::cerr << "qsd: " << e.what() << '\n';
        return kInput;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "qsd: " << e.what() << '\n';
        return kInput;
    }
    return kInput;
}
