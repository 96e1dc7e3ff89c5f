#include "emalg/report.hpp"

#include <fstream>
#include <sstream>

#include "emalg/version.hpp"

namespace emalg {

using nlohmann::json;

CampaignConfig default_config() {
  CampaignConfig cfg;
  const std::map<std::string, std::string> all_pass = {
      {"LIN", "pass"}, {"COLIN", "pass"}, {"SHUFFLE", "pass"}};
  const std::map<std::string, std::string> lin_only = {
      {"LIN", "pass"}, {"COLIN", "fail"}, {"SHUFFLE", "fail"}};
  cfg.expected["vector:1"] = all_pass;
  cfg.expected["vector:3"] = all_pass;
  cfg.expected["unipotent:2"] = all_pass;
  cfg.expected["unipotent:3"] = lin_only;
  cfg.expected["unipotent:4"] = lin_only;
  cfg.expected["unipotent:5"] = lin_only;
  cfg.expected["sphere"] = {{"LIN", "fail"},
                            {"COLIN", "fail"},
                            {"SHUFFLE", "fail"},
                            {"theorem1", "informational"}};
  return cfg;
}

void validate_config(const CampaignConfig& cfg) {
  if (!(cfg.tol.pass < cfg.tol.fail))
    throw std::invalid_argument("pass tolerance must be below fail tolerance");
  for (const auto& d : cfg.instances) make_instance(d, cfg.sample.bounds);
  validate_schedule(cfg.schedule);
  if (cfg.sample.count < 1)
    throw std::invalid_argument("sample count must be positive");
}

json config_to_json(const CampaignConfig& cfg) {
  json j;
  j["schema"] = kConfigSchema;
  j["instances"] = cfg.instances;
  j["properties"] = cfg.properties;
  j["sample"] = {{"seed", cfg.sample.seed},
                 {"count", cfg.sample.count},
                 {"scalar_lo", cfg.sample.scalar_lo},
                 {"scalar_hi", cfg.sample.scalar_hi},
                 {"bounds",
                  {{"vector_halfwidth", cfg.sample.bounds.vector_halfwidth},
                   {"unipotent_entry", cfg.sample.bounds.unipotent_entry},
                   {"sphere_cap", cfg.sample.bounds.sphere_cap}}}};
  j["schedule"] = {{"start", cfg.schedule.start},
                   {"ratio", cfg.schedule.ratio},
                   {"max_steps", cfg.schedule.max_steps}};
  j["tolerances"] = {{"pass", cfg.tol.pass},
                     {"fail", cfg.tol.fail},
                     {"em", cfg.tol.em},
                     {"roundtrip", cfg.tol.roundtrip},
                     {"solver", cfg.tol.solver}};
  j["expected"] = cfg.expected;
  j["curvature"] = {{"scales", cfg.curvature_scales},
                    {"slope_lo", cfg.curvature_slope_lo},
                    {"slope_hi", cfg.curvature_slope_hi}};
  return j;
}

CampaignConfig config_from_json(const json& j) {
  CampaignConfig cfg = default_config();
  if (j.contains("schema") && j.at("schema").get<std::string>() != kConfigSchema)
    throw std::invalid_argument("unsupported config schema: " +
                                j.at("schema").get<std::string>());
  if (j.contains("instances")) cfg.instances = j.at("instances").get<std::vector<std::string>>();
  if (j.contains("properties")) cfg.properties = j.at("properties").get<std::vector<std::string>>();
  if (j.contains("sample")) {
    const json& s = j.at("sample");
    if (s.contains("seed")) cfg.sample.seed = s.at("seed").get<std::uint64_t>();
    if (s.contains("count")) cfg.sample.count = s.at("count").get<int>();
    if (s.contains("scalar_lo")) cfg.sample.scalar_lo = s.at("scalar_lo").get<double>();
    if (s.contains("scalar_hi")) cfg.sample.scalar_hi = s.at("scalar_hi").get<double>();
    if (s.contains("bounds")) {
      const json& b = s.at("bounds");
      if (b.contains("vector_halfwidth"))
        cfg.sample.bounds.vector_halfwidth = b.at("vector_halfwidth").get<double>();
      if (b.contains("unipotent_entry"))
        cfg.sample.bounds.unipotent_entry = b.at("unipotent_entry").get<double>();
      if (b.contains("sphere_cap"))
        cfg.sample.bounds.sphere_cap = b.at("sphere_cap").get<double>();
    }
  }
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    if (s.contains("start")) cfg.schedule.start = s.at("start").get<double>();
    if (s.contains("ratio")) cfg.schedule.ratio = s.at("ratio").get<double>();
    if (s.contains("max_steps")) cfg.schedule.max_steps = s.at("max_steps").get<int>();
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (t.contains("pass")) cfg.tol.pass = t.at("pass").get<double>();
    if (t.contains("fail")) cfg.tol.fail = t.at("fail").get<double>();
    if (t.contains("em")) cfg.tol.em = t.at("em").get<double>();
    if (t.contains("roundtrip")) cfg.tol.roundtrip = t.at("roundtrip").get<double>();
    if (t.contains("solver")) cfg.tol.solver = t.at("solver").get<double>();
  }
  if (j.contains("expected"))
    cfg.expected =
        j.at("expected")
            .get<std::map<std::string, std::map<std::string, std::string>>>();
  if (j.contains("curvature")) {
    const json& c = j.at("curvature");
    if (c.contains("scales")) cfg.curvature_scales = c.at("scales").get<std::vector<double>>();
    if (c.contains("slope_lo")) cfg.curvature_slope_lo = c.at("slope_lo").get<double>();
    if (c.contains("slope_hi")) cfg.curvature_slope_hi = c.at("slope_hi").get<double>();
  }
  validate_config(cfg);
  return cfg;
}

CampaignConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

std::string expected_verdict(const CampaignConfig& cfg, const std::string& instance,
                             const std::string& property) {
  const auto row = cfg.expected.find(instance);
  if (row == cfg.expected.end()) return "pass";
  const auto cell = row->second.find(property);
  return cell == row->second.end() ? "pass" : cell->second;
}

bool matches_expected(const PropertyReport& rep, const std::string& verdict,
                      double fail_tol) {
  if (verdict == "informational") return true;
  if (verdict == "pass") return rep.passed;
  if (verdict == "fail") return rep.max_residual > fail_tol;
  throw std::invalid_argument("unknown expected verdict: " + verdict);
}

AlgebraHandle make_instance(const std::string& descriptor,
                            const DomainBounds& bounds) {
  const auto colon = descriptor.find(':');
  const std::string kind = descriptor.substr(0, colon);
  const std::string params =
      colon == std::string::npos ? "" : descriptor.substr(colon + 1);

  const auto param_int = [&](int fallback) {
    if (params.empty()) return fallback;
    try {
      std::size_t used = 0;
      const int v = std::stoi(params, &used);
      if (used != params.size()) throw std::invalid_argument(params);
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad instance parameter in '" + descriptor + "'");
    }
  };

  if (kind == "vector")
    return make_vector_space(param_int(3), bounds.vector_halfwidth);
  if (kind == "unipotent")
    return make_unipotent(param_int(3), bounds.unipotent_entry);
  if (kind == "sphere") {
    if (!params.empty())
      throw std::invalid_argument("sphere takes no parameters in '" + descriptor + "'");
    return make_sphere(bounds.sphere_cap);
  }
  throw std::invalid_argument("unknown instance kind: " + descriptor);
}

ConicalGroupSpec group_spec_for(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  const std::string kind = descriptor.substr(0, colon);
  const int n = colon == std::string::npos
                    ? 3
                    : std::stoi(descriptor.substr(colon + 1));
  if (kind == "vector") return vector_group_spec(n);
  if (kind == "unipotent") return unipotent_group_spec(n);
  throw std::invalid_argument("no group spec behind instance: " + descriptor);
}

json point_to_json(const Point& p) {
  if (p.cols() == 1) {
    std::vector<double> flat(p.data(), p.data() + p.rows());
    return json(flat);
  }
  json rows = json::array();
  for (int i = 0; i < p.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < p.cols(); ++j) row.push_back(p(i, j));
    rows.push_back(row);
  }
  return rows;
}

json property_report_to_json(const PropertyReport& rep) {
  return json{{"property", rep.property},
              {"instance", rep.instance},
              {"max_residual", rep.max_residual},
              {"argmax_sample", rep.argmax_sample},
              {"count", rep.count},
              {"skipped", rep.skipped},
              {"tolerance", rep.tolerance},
              {"passed", rep.passed},
              {"note", rep.note}};
}

json convergence_report_to_json(const ConvergenceReport& rep, bool include_limit) {
  json j{{"converged", rep.converged},
         {"steps_used", rep.steps_used},
         {"tol", rep.tol}};
  json trace = json::array();
  for (std::size_t i = 0; i < rep.residuals.size(); ++i)
    trace.push_back(json::array({static_cast<int>(i + 1), rep.residuals[i]}));
  j["trace"] = trace;
  if (include_limit && rep.limit) j["limit"] = point_to_json(*rep.limit);
  return j;
}

std::string serialize_report(const RunReport& rep) {
  json doc = rep.body;
  doc["timings"] = rep.timings;
  return doc.dump(2) + "\n";
}

RunReport parse_report_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("report is not valid JSON: " + std::string(e.what()));
  }
  RunReport rep;
  if (doc.contains("timings")) {
    rep.timings = doc.at("timings");
    doc.erase("timings");
  }
  rep.body = std::move(doc);
  return rep;
}

void save_report(const RunReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open report file for writing: " + path);
  out << serialize_report(rep);
}

RunReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open report file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_report_text(buf.str());
}

}  // namespace emalg
