#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace levyqsd::verify {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::vector<std::string> details;
    double seconds = 0.0;
};

struct VerifyOptions {
    unsigned threads = 1;
    std::uint64_t seed = 20240917;
    /// Replications for the simulation cross-check.
    std::uint64_t replications = 1000000;
};

[[nodiscard]] CriterionResult brownian_critical_point();
[[nodiscard]] CriterionResult brownian_c1_grid();
[[nodiscard]] CriterionResult brownian_mu_xi_grid();
[[nodiscard]] CriterionResult erlang2_reference_forms();
[[nodiscard]] CriterionResult expansion_vs_transform();
[[nodiscard]] CriterionResult tauberian_agreement();
[[nodiscard]] CriterionResult rate_law();
[[nodiscard]] CriterionResult simulation_cross_check(const VerifyOptions& options);
[[nodiscard]] CriterionResult density_inversion(const VerifyOptions& options);
[[nodiscard]] CriterionResult property_suite();

/// All criteria in order.
[[nodiscard]] std::vector<CriterionResult> run_all(const VerifyOptions& options);

/// One "PASS"/"FAIL" line per criterion followed by indented details.
void print_report(std::ostream& os, const std::vector<CriterionResult>& results);

}  // namespace levyqsd::verify
