// Command-line driver: configure instances and campaigns, run the
// verification suites and solvers, emit machine-readable reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emalg/commands.hpp"
#include "emalg/version.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol;
  std::string out_path;
  std::string instance;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_instance = true) {
  cmd->add_option("--config", f.config_path, "JSON campaign config (emalg-config/1)");
  cmd->add_option("--seed", f.seed, "override the sample seed");
  cmd->add_option("--samples", f.samples, "override the sample count");
  cmd->add_option("--tol", f.tol, "override the relevant tolerance");
  cmd->add_option("--out", f.out_path, "write the JSON report here");
  if (with_instance)
    cmd->add_option("--instance", f.instance,
                    "restrict to one instance, e.g. vector:3, unipotent:4, sphere");
}

emalg::CampaignConfig resolve_config(const CommonFlags& f) {
  emalg::CampaignConfig cfg = f.config_path.empty()
                                  ? emalg::default_config()
                                  : emalg::load_config(f.config_path);
  if (f.seed) cfg.sample.seed = *f.seed;
  if (f.samples) cfg.sample.count = *f.samples;
  if (!f.instance.empty()) cfg.instances = {f.instance};
  return cfg;
}

int deliver(const emalg::CommandOutcome& outcome, const CommonFlags& f,
            const std::string& plot_path) {
  std::cout << emalg::format_report_summary(outcome.report);
  if (!f.out_path.empty()) {
    emalg::save_report(outcome.report, f.out_path);
    std::cout << "report written to " << f.out_path << "\n";
  }
  if (!plot_path.empty()) {
    std::ofstream out(plot_path);
    if (!out) throw std::invalid_argument("cannot open plot file: " + plot_path);
    out << emalg::report_plot_rows(outcome.report);
    std::cout << "plot rows written to " << plot_path << "\n";
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(emalg::kToolName) +
               " - emergent-algebra verification workbench"};
  app.set_version_flag("--version", emalg::kToolVersion);
  app.require_subcommand(1);

  CommonFlags ax_flags;
  CLI::App* ax = app.add_subcommand("axioms", "axiom and convergence suites");
  add_common(ax, ax_flags);

  CommonFlags prop_flags;
  std::string prop_kind = "all";
  CLI::App* prop = app.add_subcommand("property", "property campaigns");
  add_common(prop, prop_flags);
  prop->add_option("--kind", prop_kind,
                   "LIN, COLIN, SHUFFLE, theorem1, theorem2, theorem3 or all");

  CommonFlags geo_flags;
  double geo_epsilon = 0.5;
  std::vector<double> geo_target;
  std::string geo_plot;
  CLI::App* geo = app.add_subcommand("geomseries", "series solves on one instance");
  add_common(geo, geo_flags);
  geo->add_option("--epsilon", geo_epsilon, "series ratio in (0,1)");
  geo->add_option("--target", geo_target, "target entries (layout depends on kind)")
      ->delimiter(',');
  geo->add_option("--plot", geo_plot, "write (n, residual) rows here");

  CommonFlags curv_flags;
  std::vector<double> curv_scales;
  std::string curv_plot;
  CLI::App* curv = app.add_subcommand("curvature", "Schild's-ladder gap scaling");
  add_common(curv, curv_flags);
  curv->add_option("--scales", curv_scales, "decreasing ladder scales")
      ->delimiter(',');
  curv->add_option("--plot", curv_plot, "write (a, gap) rows here");

  std::string report_in;
  CLI::App* show = app.add_subcommand("report", "pretty-print a stored report");
  show->add_option("--in", report_in, "report file to print")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (ax->parsed()) {
      emalg::CampaignConfig cfg = resolve_config(ax_flags);
      if (ax_flags.tol) cfg.tol.pass = *ax_flags.tol;
      return deliver(emalg::cmd_axioms(cfg), ax_flags, "");
    }
    if (prop->parsed()) {
      emalg::CampaignConfig cfg = resolve_config(prop_flags);
      if (prop_flags.tol) cfg.tol.pass = *prop_flags.tol;
      return deliver(emalg::cmd_property(cfg, prop_kind), prop_flags, "");
    }
    if (geo->parsed()) {
      emalg::CampaignConfig cfg = resolve_config(geo_flags);
      const std::string inst =
          geo_flags.instance.empty() ? "vector:1" : geo_flags.instance;
      const double tol = geo_flags.tol ? *geo_flags.tol : cfg.tol.solver;
      const std::optional<std::vector<double>> target =
          geo_target.empty() ? std::nullopt
                             : std::optional<std::vector<double>>(geo_target);
      return deliver(emalg::cmd_geomseries(cfg, inst, target, geo_epsilon, tol),
                     geo_flags, geo_plot);
    }
    if (curv->parsed()) {
      emalg::CampaignConfig cfg = resolve_config(curv_flags);
      return deliver(emalg::cmd_curvature(cfg, curv_flags.instance, curv_scales),
                     curv_flags, curv_plot);
    }
    if (show->parsed()) {
      const emalg::RunReport rep = emalg::load_report(report_in);
      std::cout << emalg::format_report_summary(rep);
      if (!rep.timings.empty())
        std::cout << "  timings: " << rep.timings.dump() << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
