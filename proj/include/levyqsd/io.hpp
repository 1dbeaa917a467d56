#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "levyqsd/levy_model.hpp"
#include "levyqsd/qsim.hpp"
#include "levyqsd/transform_lab.hpp"

namespace levyqsd::io {

using json = nlohmann::ordered_json;

/// Model document:
///   {"kind": "sn" | "sp",
///    "family": "cp_erlang" | "brownian" | "generic",
///    "params": {...}}
/// cp_erlang params: lambda, shape, nu. brownian params: sigma, c.
/// generic params: coefficients [a0, a1, ...] of the polynomial exponent
/// sum a_i eta^i, domain [lo, hi] (null for an infinite end),
/// analyticity_asserted (bool, default false).
/// Throws Error(SchemaError) on malformed input.
[[nodiscard]] LevyModel model_from_json(const json& doc);
[[nodiscard]] json model_to_json(const LevyModel& model);
[[nodiscard]] LevyModel load_model(const std::filesystem::path& file);

/// Reads a JSON file; Error(IoError) if unreadable, Error(SchemaError) if not JSON.
[[nodiscard]] json read_json(const std::filesystem::path& file);
void write_json(const std::filesystem::path& file, const json& doc);

struct SimulationSpec {
    bool enabled = false;
    std::uint64_t replications = 100000;
    std::uint64_t seed = 1;
    Tilt tilt = Tilt::ThetaStar;
    /// Absent means horizon / 100 of the smallest grid time.
    std::optional<double> brownian_step;
};

/// Fully resolved description of a run. Echoed into every sidecar; feeding a
/// sidecar back through --study reproduces the run.
struct StudySpec {
    json model;
    std::vector<std::pair<double, double>> points{{0.0, 0.0}};
    std::vector<double> times;
    std::vector<double> thetas;
    InversionConfig inversion;
    SimulationSpec simulation;
    DensityKind density = DensityKind::Mu;
    std::vector<double> x_grid;
    std::vector<double> y_grid;
    std::string out_dir = ".";
    unsigned threads = 1;
};

/// Accepts a study object or a sidecar carrying one under "study". A
/// "model_file" entry is resolved relative to `base_dir`. Grids may be explicit
/// lists or {"from", "to", "count", "spacing": "log" | "linear"}.
[[nodiscard]] StudySpec study_from_json(const json& doc, const std::filesystem::path& base_dir);
[[nodiscard]] StudySpec load_study(const std::filesystem::path& file);
[[nodiscard]] json study_to_json(const StudySpec& spec);

/// Validates grids (non-empty where given, sorted) and the inversion config.
void validate_study(const StudySpec& spec);

/// "a:b:n" -> n log-spaced points from a to b.
[[nodiscard]] std::vector<double> parse_log_grid(const std::string& text);
[[nodiscard]] std::vector<double> log_grid(double from, double to, std::size_t count);
[[nodiscard]] std::vector<double> linear_grid(double from, double to, std::size_t count);

/// 17 significant digits, enough to round-trip any double.
[[nodiscard]] std::string format_double(double x);

[[nodiscard]] std::string_view to_string(Tilt tilt) noexcept;
[[nodiscard]] std::string_view to_string(DensityKind kind) noexcept;

}  // namespace levyqsd::io
