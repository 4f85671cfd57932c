// gfrsim: run scenarios and parameter sweeps, writing CSV results.
//
// Exit codes: 0 success, 1 usage, 2 invalid scenario, 3 model assertion,
// 4 output write failure.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "gfrsim/errors.hpp"
#include "gfrsim/report.hpp"
#include "gfrsim/runner.hpp"
#include "gfrsim/scenario.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitScenario = 2;
constexpr int kExitModel = 3;
constexpr int kExitWrite = 4;

struct Common {
  std::string scenario;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> duration;
  std::vector<std::string> sets;
  std::string out = "out";
  bool quiet = false;
};

void add_common(CLI::App& cmd, Common& c) {
  auto* file = cmd.add_option("scenario", c.scenario, "Scenario INI file");
  auto* pre = cmd.add_option("-p,--preset", c.preset, "Built-in preset name");
  file->excludes(pre);
  cmd.add_option("--seed", c.seed, "Override run.seed");
  cmd.add_option("--duration", c.duration, "Override run.duration, e.g. 10s");
  cmd.add_option("--set", c.sets, "Override any key: section.key=value")->take_all();
  cmd.add_option("-o,--out", c.out, "Output directory")->capture_default_str();
  cmd.add_flag("-q,--quiet", c.quiet, "Print nothing on success");
}

gfrsim::ScenarioConfig resolve(const Common& c) {
  if (c.scenario.empty() == c.preset.empty()) {
    throw CLI::ValidationError("scenario", "give exactly one of a scenario file or --preset");
  }
  gfrsim::ScenarioConfig cfg =
      c.preset.empty() ? gfrsim::load_scenario_file(c.scenario) : gfrsim::preset(c.preset);
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw gfrsim::ConfigError("--set needs key=value, got '" + s + "'");
    cfg = gfrsim::with_override(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (c.seed) cfg.seed = *c.seed;
  if (c.duration) cfg.duration = gfrsim::parse_duration(*c.duration);
  return cfg;
}

void print_report(const gfrsim::ThroughputReport& r) {
  std::cout << "scenario " << r.scenario << " seed " << r.seed << '\n';
  for (const auto& g : r.groups) {
    std::cout << "  group " << g.group << "  goodput " << gfrsim::fixed6(g.goodput_mbps)
              << " Mbps";
    if (g.ratio) std::cout << "  ratio " << gfrsim::fixed6(*g.ratio);
    std::cout << '\n';
  }
  std::cout << "  total " << gfrsim::fixed6(r.total_goodput_mbps) << " Mbps  utilization "
            << gfrsim::fixed6(r.utilization) << "  max queue " << r.max_queue_cells
            << " cells\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ATM switch buffer-management simulator"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "Run one scenario");
  add_common(*run, run_opts);

  Common sweep_opts;
  gfrsim::SweepSpec spec;
  auto* sw = app.add_subcommand("sweep", "Run one scenario per parameter value");
  add_common(*sw, sweep_opts);
  sw->add_option("--param", spec.key, "Parameter to vary, section.key")->required();
  sw->add_option("--values", spec.values, "Values, one per run (lists use ';' between items)")
      ->required()
      ->take_all();
  sw->add_option("-j,--jobs", spec.jobs, "Parallel runs")->capture_default_str();

  std::string dump_preset;
  auto* dump = app.add_subcommand("dump", "Print a preset as a scenario file");
  dump->add_option("preset", dump_preset, "Preset name")->required();

  app.add_subcommand("presets", "List built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand("presets")) {
      for (const auto& n : gfrsim::preset_names()) std::cout << n << '\n';
      return 0;
    }
    if (*dump) {
      std::cout << gfrsim::to_ini(gfrsim::preset(dump_preset));
      return 0;
    }
    if (*run) {
      const auto cfg = resolve(run_opts);
      const auto result = gfrsim::run_scenario(cfg);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      gfrsim::write_run_outputs(result, run_opts.out);
      if (!run_opts.quiet) print_report(result.report);
      return 0;
    }
    const auto cfg = resolve(sweep_opts);
    // Semicolons stand in for commas so list values survive the shell.
    for (auto& v : spec.values) std::replace(v.begin(), v.end(), ';', ',');
    const auto runs = gfrsim::sweep(cfg, spec);
    gfrsim::write_sweep_outputs(spec, runs, sweep_opts.out);
    if (!sweep_opts.quiet) {
      for (const auto& r : runs) print_report(r.report);
    }
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gfrsim::ConfigError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kExitScenario;
  } catch (const gfrsim::ModelError& e) {
    std::cerr << "model assertion: " << e.what() << '\n';
    return kExitModel;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitWrite;
  }
}
