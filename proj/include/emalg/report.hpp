#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "emalg/limits.hpp"
#include "emalg/verifier.hpp"

namespace emalg {

struct Tolerances {
  double pass = 1e-9;       // residual below this is a pass
  double fail = 1e-3;       // residual above this is a definite failure
  double em = 1e-6;         // convergence suite
  double roundtrip = 1e-6;  // tangent-group reconstruction
  double solver = 1e-9;     // fixed-point solvers
};

// Campaign description, loadable from a versioned JSON document. The
// expected-classification matrix is data here, not code: entries are
// "pass", "fail" or "informational" per instance and property.
struct CampaignConfig {
  std::vector<std::string> instances = {"vector:1",    "vector:3",
                                        "unipotent:2", "unipotent:3",
                                        "unipotent:4", "unipotent:5",
                                        "sphere"};
  std::vector<std::string> properties = {"axioms",   "em",       "LIN",
                                         "COLIN",    "SHUFFLE",  "theorem1",
                                         "theorem2", "theorem3"};
  SampleSpec sample;
  AbsoluteSchedule schedule;
  Tolerances tol;
  std::map<std::string, std::map<std::string, std::string>> expected;
  std::vector<double> curvature_scales = {0.2, 0.1, 0.05, 0.025};
  double curvature_slope_lo = 1.85;
  double curvature_slope_hi = 2.15;
};

// Ships the expected matrix for the built-in instances.
CampaignConfig default_config();

void validate_config(const CampaignConfig& cfg);
nlohmann::json config_to_json(const CampaignConfig& cfg);
CampaignConfig config_from_json(const nlohmann::json& j);
CampaignConfig load_config(const std::string& path);

// Expected verdict for one instance/property cell; "pass" when the matrix
// has no entry.
std::string expected_verdict(const CampaignConfig& cfg, const std::string& instance,
                             const std::string& property);

// True when a report agrees with its expected verdict: "pass" needs
// passed, "fail" needs the residual above the fail threshold,
// "informational" always matches.
bool matches_expected(const PropertyReport& rep, const std::string& verdict,
                      double fail_tol);

// Builds a shipped instance from its descriptor, e.g. "vector:3",
// "unipotent:4", "sphere". Unknown kinds raise std::invalid_argument.
AlgebraHandle make_instance(const std::string& descriptor,
                            const DomainBounds& bounds);

// Group spec behind a descriptor, for the dichotomy checks; the sphere has
// none and raises std::invalid_argument.
ConicalGroupSpec group_spec_for(const std::string& descriptor);

// One run's output: a deterministic body plus wall-clock timings kept
// outside it, so byte comparison of bodies checks reproducibility.
struct RunReport {
  nlohmann::json body;
  nlohmann::json timings = nlohmann::json::object();
};

// Single self-describing document; parse(serialize(r)) == r field for field.
std::string serialize_report(const RunReport& rep);
RunReport parse_report_text(const std::string& text);
void save_report(const RunReport& rep, const std::string& path);
RunReport load_report(const std::string& path);

nlohmann::json point_to_json(const Point& p);
nlohmann::json property_report_to_json(const PropertyReport& rep);
nlohmann::json convergence_report_to_json(const ConvergenceReport& rep,
                                          bool include_limit = true);

}  // namespace emalg
