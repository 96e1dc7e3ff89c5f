#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "emalg/commands.hpp"
#include "emalg/version.hpp"

using namespace emalg;
using nlohmann::json;

namespace {

CampaignConfig small_config(std::vector<std::string> instances, int count = 120) {
  CampaignConfig cfg = default_config();
  cfg.instances = std::move(instances);
  cfg.sample.count = count;
  return cfg;
}

int run_cli(const std::string& args, const std::string& capture = "/dev/null") {
  const char* bin = std::getenv("EMALG_CLI_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "EMALG_CLI_BIN must point at the cli binary");
  const std::string cmd = std::string(bin) + " " + args + " > " + capture + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("default config is valid and its matrix covers the zoo") {
  const CampaignConfig cfg = default_config();
  CHECK_NOTHROW(validate_config(cfg));
  CHECK(expected_verdict(cfg, "unipotent:3", "COLIN") == "fail");
  CHECK(expected_verdict(cfg, "unipotent:2", "COLIN") == "pass");
  CHECK(expected_verdict(cfg, "sphere", "LIN") == "fail");
  CHECK(expected_verdict(cfg, "sphere", "theorem1") == "informational");
  // Cells that are not listed default to pass.
  CHECK(expected_verdict(cfg, "vector:3", "theorem3") == "pass");
  CHECK(expected_verdict(cfg, "vector:9", "LIN") == "pass");
}

TEST_CASE("config json round trip preserves every field") {
  CampaignConfig cfg = default_config();
  cfg.instances = {"vector:2", "unipotent:4"};
  cfg.sample.seed = 777;
  cfg.sample.count = 55;
  cfg.sample.bounds.sphere_cap = 0.3;
  cfg.schedule.max_steps = 40;
  cfg.tol.em = 1e-5;
  cfg.curvature_scales = {0.4, 0.2, 0.1, 0.05};
  cfg.curvature_slope_lo = 1.9;

  const CampaignConfig back = config_from_json(config_to_json(cfg));
  CHECK(back.instances == cfg.instances);
  CHECK(back.sample.seed == 777);
  CHECK(back.sample.count == 55);
  CHECK(back.sample.bounds.sphere_cap == 0.3);
  CHECK(back.schedule.max_steps == 40);
  CHECK(back.tol.em == 1e-5);
  CHECK(back.curvature_scales == cfg.curvature_scales);
  CHECK(back.curvature_slope_lo == 1.9);
  CHECK(back.expected == cfg.expected);
}

TEST_CASE("config rejects bad schemas and bad contents") {
  json j = config_to_json(default_config());
  j["schema"] = "emalg-config/99";
  CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);

  CampaignConfig bad_tol = default_config();
  bad_tol.tol.pass = 1e-2;  // above the fail threshold
  CHECK_THROWS_AS(validate_config(bad_tol), std::invalid_argument);

  CampaignConfig bad_inst = default_config();
  bad_inst.instances = {"moebius:2"};
  CHECK_THROWS_AS(validate_config(bad_inst), std::invalid_argument);

  CHECK_THROWS_AS(load_config("does-not-exist.json"), std::invalid_argument);

  std::ofstream("tmp_bad_config.json") << "{ not json";
  CHECK_THROWS_AS(load_config("tmp_bad_config.json"), std::invalid_argument);
}

TEST_CASE("config file load honors overrides") {
  CampaignConfig cfg = default_config();
  cfg.instances = {"vector:1"};
  cfg.sample.count = 9;
  std::ofstream("tmp_config.json") << config_to_json(cfg).dump(2);
  const CampaignConfig back = load_config("tmp_config.json");
  CHECK(back.instances == std::vector<std::string>{"vector:1"});
  CHECK(back.sample.count == 9);
}

TEST_CASE("expected-verdict matching semantics") {
  PropertyReport rep;
  rep.passed = true;
  rep.max_residual = 1e-12;
  CHECK(matches_expected(rep, "pass", 1e-3));
  CHECK_FALSE(matches_expected(rep, "fail", 1e-3));
  CHECK(matches_expected(rep, "informational", 1e-3));

  rep.passed = false;
  rep.max_residual = 0.5;
  CHECK_FALSE(matches_expected(rep, "pass", 1e-3));
  CHECK(matches_expected(rep, "fail", 1e-3));
  CHECK(matches_expected(rep, "informational", 1e-3));

  // Gray zone: failed the pass tolerance without clearing the fail bar.
  rep.max_residual = 1e-6;
  CHECK_FALSE(matches_expected(rep, "fail", 1e-3));

  CHECK_THROWS_AS(matches_expected(rep, "maybe", 1e-3), std::invalid_argument);
}

TEST_CASE("instance descriptors parse or fail loudly") {
  const DomainBounds b;
  CHECK(make_instance("vector:3", b).name == "vector:3");
  CHECK(make_instance("vector", b).name == "vector:3");  // default dimension
  CHECK(make_instance("unipotent:4", b).name == "unipotent:4");
  CHECK(make_instance("sphere", b).name == "sphere");
  CHECK_THROWS_AS(make_instance("sphere:2", b), std::invalid_argument);
  CHECK_THROWS_AS(make_instance("vector:banana", b), std::invalid_argument);
  CHECK_THROWS_AS(make_instance("vector:3x", b), std::invalid_argument);
  CHECK_THROWS_AS(make_instance("vector:0", b), std::invalid_argument);
  CHECK_THROWS_AS(make_instance("torus", b), std::invalid_argument);

  CHECK_NOTHROW(group_spec_for("vector:2"));
  CHECK_NOTHROW(group_spec_for("unipotent:3"));
  CHECK_THROWS_AS(group_spec_for("sphere"), std::invalid_argument);
}

TEST_CASE("points serialize as flat vectors or row arrays") {
  Point col(3, 1);
  col << 1, 2, 3;
  CHECK(point_to_json(col) == json({1.0, 2.0, 3.0}));
  Point m(2, 2);
  m << 1, 2, 3, 4;
  CHECK(point_to_json(m) == json({{1.0, 2.0}, {3.0, 4.0}}));
}

TEST_CASE("run reports round-trip through text and disk") {
  RunReport rep;
  rep.body["schema"] = kReportSchema;
  rep.body["command"] = "axioms";
  rep.body["results"] = json::array({{{"property", "axioms"}, {"passed", true}}});
  rep.timings = {{"total_ms", 12.5}};

  const RunReport back = parse_report_text(serialize_report(rep));
  CHECK(back.body == rep.body);
  CHECK(back.timings == rep.timings);

  save_report(rep, "tmp_report.json");
  const RunReport loaded = load_report("tmp_report.json");
  CHECK(loaded.body == rep.body);
  CHECK(loaded.timings == rep.timings);

  CHECK_THROWS_AS(load_report("no-such-report.json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_report_text("nope"), std::invalid_argument);
}

TEST_CASE("convergence trace serialization keeps step indices") {
  ConvergenceReport rep;
  rep.converged = true;
  rep.steps_used = 3;
  rep.tol = 1e-9;
  rep.residuals = {0.5, 1e-12};
  rep.limit = Point::Ones(2, 1);
  const json j = convergence_report_to_json(rep);
  CHECK(j["trace"] == json({{1, 0.5}, {2, 1e-12}}));
  CHECK(j["limit"] == json({1.0, 1.0}));
  const json bare = convergence_report_to_json(rep, false);
  CHECK_FALSE(bare.contains("limit"));
}

TEST_CASE("axiom command: passing run, exit 0, deterministic body") {
  const CampaignConfig cfg = small_config({"vector:2", "unipotent:2"}, 60);
  const CommandOutcome a = cmd_axioms(cfg);
  CHECK(a.exit_code == 0);
  CHECK(a.report.body["results"].size() == 4);  // axioms + convergence per instance
  CHECK(a.report.body["summary"]["expectations_met"] == true);
  CHECK(a.report.body["schema"] == kReportSchema);
  CHECK(a.report.timings.contains("total_ms"));

  const CommandOutcome b = cmd_axioms(cfg);
  CHECK(a.report.body.dump() == b.report.body.dump());
}

TEST_CASE("property command: expected failures match and exit 0") {
  const CommandOutcome out =
      cmd_property(small_config({"vector:3", "unipotent:3"}, 150), "COLIN");
  CHECK(out.exit_code == 0);
  REQUIRE(out.report.body["results"].size() == 2);
  const json& vec = out.report.body["results"][0];
  CHECK(vec["instance"] == "vector:3");
  CHECK(vec["passed"] == true);
  CHECK(vec["expected"] == "pass");
  const json& uni = out.report.body["results"][1];
  CHECK(uni["instance"] == "unipotent:3");
  CHECK(uni["passed"] == false);
  CHECK(uni["expected"] == "fail");
  CHECK(uni["matched"] == true);
  CHECK(out.report.body["summary"]["all_passed"] == false);
  CHECK(out.report.body["summary"]["expectations_met"] == true);
}

TEST_CASE("property command: unexpected outcomes exit 1") {
  CampaignConfig cfg = small_config({"unipotent:3"}, 150);
  cfg.expected["unipotent:3"]["COLIN"] = "pass";  // wrong on purpose
  const CommandOutcome out = cmd_property(cfg, "COLIN");
  CHECK(out.exit_code == 1);
  CHECK(out.report.body["results"][0]["matched"] == false);
}

TEST_CASE("property command rejects unknown kinds") {
  CHECK_THROWS_AS(cmd_property(small_config({"vector:2"}, 10), "LINEAR"),
                  std::invalid_argument);
}

TEST_CASE("theorem2 command rows: dichotomy plus identity, sphere skipped") {
  const CommandOutcome out =
      cmd_property(small_config({"vector:2", "sphere"}, 100), "theorem2");
  CHECK(out.exit_code == 0);
  REQUIRE(out.report.body["results"].size() == 3);
  CHECK(out.report.body["results"][0]["property"] == "theorem2-dichotomy");
  CHECK(out.report.body["results"][0]["instance"] == "vector:2");
  CHECK(out.report.body["results"][1]["property"] == "commutator-identity");
  const json& sphere_row = out.report.body["results"][2];
  CHECK(sphere_row["instance"] == "sphere");
  CHECK(sphere_row["expected"] == "informational");
  const std::string note = sphere_row["note"];
  CHECK(note.find("skipped") != std::string::npos);
}

TEST_CASE("geomseries command on the vector line") {
  const CampaignConfig cfg = small_config({"vector:1"}, 10);
  const CommandOutcome out =
      cmd_geomseries(cfg, "vector:1", std::nullopt, 0.5, 1e-9);
  CHECK(out.exit_code == 0);
  const json& dil = out.report.body["solves"]["dilation"];
  CHECK(dil["converged"] == true);
  CHECK(dil["limit"][0].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_FALSE(out.report.body["solves"].contains("commutator"));
}

TEST_CASE("geomseries command on a unipotent instance adds the cross-checks") {
  const CampaignConfig cfg = small_config({"unipotent:3"}, 10);
  const CommandOutcome out =
      cmd_geomseries(cfg, "unipotent:3", std::nullopt, 0.5, 1e-9);
  CHECK(out.exit_code == 0);
  const json& solves = out.report.body["solves"];
  CHECK(solves["dilation"]["converged"] == true);
  CHECK(solves["commutator"]["converged"] == true);
  CHECK(solves["partial_sum_crosscheck"]["passed"] == true);
  CHECK(solves["partial_sum_crosscheck"]["orders_checked"].get<int>() == 6);
}

TEST_CASE("geomseries command validates ratio and target shape") {
  const CampaignConfig cfg = small_config({"vector:3"}, 10);
  CHECK_THROWS_AS(cmd_geomseries(cfg, "vector:3", std::nullopt, 1.5, 1e-9),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      cmd_geomseries(cfg, "vector:3", std::vector<double>{1.0}, 0.5, 1e-9),
      std::invalid_argument);
  CHECK_NOTHROW(
      cmd_geomseries(cfg, "vector:3", std::vector<double>{1, 2, 3}, 0.5, 1e-9));
}

TEST_CASE("curvature command: sphere curved, vector flat, both exit 0") {
  const CampaignConfig cfg = small_config({"sphere"}, 10);
  const CommandOutcome out = cmd_curvature(cfg, "", {});
  CHECK(out.exit_code == 0);
  REQUIRE(out.report.body["curvature"].size() == 2);
  CHECK(out.report.body["curvature"][0]["instance"] == "sphere");
  CHECK(out.report.body["curvature"][0]["verdict"] == "curved");
  CHECK(out.report.body["curvature"][1]["instance"] == "vector:3");
  CHECK(out.report.body["curvature"][1]["verdict"] == "flat");

  CHECK_THROWS_AS(cmd_curvature(cfg, "unipotent:3", {}), std::invalid_argument);
  CHECK_THROWS_AS(cmd_curvature(cfg, "vector:1", {}), std::invalid_argument);
}

TEST_CASE("summaries and plot rows render the key facts") {
  const CampaignConfig cfg = small_config({"vector:1"}, 20);
  const CommandOutcome ax = cmd_axioms(cfg);
  const std::string text = format_report_summary(ax.report);
  CHECK(text.find("axioms") != std::string::npos);
  CHECK(text.find("[ok]") != std::string::npos);
  CHECK(text.find("all expectations met") != std::string::npos);

  const CommandOutcome geo = cmd_geomseries(cfg, "vector:1", std::nullopt, 0.5, 1e-9);
  const std::string rows = report_plot_rows(geo.report);
  CHECK(rows.rfind("# n\tresidual", 0) == 0);
  CHECK(rows.find("\t") != std::string::npos);

  const CommandOutcome curv = cmd_curvature(cfg, "sphere", {});
  const std::string crows = report_plot_rows(curv.report);
  CHECK(crows.find("a\tgap") != std::string::npos);
  CHECK(crows.find("0.2\t") != std::string::npos);
}

TEST_CASE("cli: passing axiom run writes a loadable report") {
  const int code = run_cli(
      "axioms --instance vector:2 --samples 40 --seed 7 --out tmp_cli_ax.json");
  CHECK(code == 0);
  const RunReport rep = load_report("tmp_cli_ax.json");
  CHECK(rep.body["schema"] == kReportSchema);
  CHECK(rep.body["command"] == "axioms");
  CHECK(rep.body["seed"] == 7);
  CHECK(rep.body["summary"]["expectations_met"] == true);
  CHECK(rep.timings.contains("total_ms"));
}

TEST_CASE("cli: property campaign with an expected failure still exits 0") {
  const int code =
      run_cli("property --kind COLIN --instance unipotent:3 --samples 120");
  CHECK(code == 0);
}

TEST_CASE("cli: usage and config errors exit 2") {
  CHECK(run_cli("geomseries --epsilon 1.5") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("axioms --instance klein:4 --samples 5") == 2);
  CHECK(run_cli("report --in no-such-file.json") == 2);
  CHECK(run_cli("") == 2);  // a subcommand is required
}

TEST_CASE("cli: report pretty-printer reads back a stored run") {
  REQUIRE(run_cli("geomseries --epsilon 0.5 --samples 5 --out tmp_cli_geo.json") == 0);
  const int code = run_cli("report --in tmp_cli_geo.json", "tmp_cli_report.txt");
  CHECK(code == 0);
  const std::string text = slurp("tmp_cli_report.txt");
  CHECK(text.find("dilation solve on vector:1") != std::string::npos);
  CHECK(text.find("converged") != std::string::npos);
  CHECK(text.find("timings") != std::string::npos);
}

TEST_CASE("cli: version flag reports the tool version") {
  const int code = run_cli("--version", "tmp_cli_version.txt");
  CHECK(code == 0);
  CHECK(slurp("tmp_cli_version.txt").find(kToolVersion) != std::string::npos);
}

TEST_CASE("cli: plot files carry tab-separated rows") {
  REQUIRE(run_cli("curvature --instance sphere --scales 0.2,0.1,0.05,0.025 "
                  "--plot tmp_cli_plot.tsv") == 0);
  const std::string rows = slurp("tmp_cli_plot.tsv");
  CHECK(rows.find("# sphere: a\tgap") != std::string::npos);
  CHECK(rows.find("0.05\t") != std::string::npos);
}
