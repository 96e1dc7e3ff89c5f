#pragma once

#include <optional>
#include <string>
#include <vector>

#include "emalg/geomseries.hpp"
#include "emalg/report.hpp"

namespace emalg {

// Process exit conventions, stable across runs:
//   0 = all expectations met, 1 = verification or convergence failure,
//   2 = usage/config error (raised as std::invalid_argument and mapped by
//       the binary).
struct CommandOutcome {
  RunReport report;
  int exit_code = 0;
};

// Axiom and convergence suites over the configured instances.
CommandOutcome cmd_axioms(const CampaignConfig& cfg);

// Property campaigns. kind is one of LIN, COLIN, SHUFFLE, theorem1,
// theorem2, theorem3, or "all". Exit 0 iff every report matches the
// expected classification matrix in the config.
CommandOutcome cmd_property(const CampaignConfig& cfg, const std::string& kind);

// Fixed-point series solve on one instance; unipotent instances also get
// the commutator solve and the closed-vs-factored partial-sum cross-check.
// target_params overrides the canonical target (entries as documented per
// kind); epsilon must lie in (0, 1).
CommandOutcome cmd_geomseries(const CampaignConfig& cfg, const std::string& instance,
                              const std::optional<std::vector<double>>& target_params,
                              double epsilon, double tol);

// Schild's-ladder gap scaling on the named instance ("sphere" or a flat
// "vector:n" adapter); empty instance runs both defaults.
CommandOutcome cmd_curvature(const CampaignConfig& cfg, const std::string& instance,
                             const std::vector<double>& a_values);

// Human summary of a run report, one line per result row.
std::string format_report_summary(const RunReport& rep);

// Flat (a, gap) / (n, residual) rows of a report as tab-separated text for
// plotting; empty when the report has no row data.
std::string report_plot_rows(const RunReport& rep);

}  // namespace emalg
