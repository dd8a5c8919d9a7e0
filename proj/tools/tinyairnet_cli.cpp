// tinyairnet: experiment harness for the TinyML-filtered image retrieval
// energy model.
//
// Usage:
//   tinyairnet [analyze|simulate|optimize|figure2|figure3] [--config file.ini]
//              [--seed N] [--trials N] [--out path] [--set section.key=value]...
//
// Precedence: command-line flag > config file > preset default.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tinyairnet/tinyairnet.hpp"

namespace {

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

// Scenario flags mirror config keys one to one.
constexpr Flag kScenarioFlags[] = {
    {"--b-q", "model.b_q", "quantization bits"},
    {"--model", "model.preset", "model preset (etinynet1.0)"},
    {"--radio", "radio.preset", "radio preset (nbiot)"},
    {"--n-images", "scenario.n_images", "number of stored images"},
    {"--delta", "scenario.delta", "server relevance threshold"},
    {"--v-th", "scenario.v_th", "device similarity threshold"},
    {"--gamma-th", "scenario.gamma_th", "target retrieval accuracy"},
    {"--sigma-ml", "scenario.sigma_ml", "observation noise override"},
    {"--grid-step", "run.grid_step", "optimizer threshold step"},
    {"--threads", "run.threads", "worker threads (0 = all cores)"},
    {"--vth-grid", "run.vth_grid", "comma-separated threshold grid"},
    {"--n-list", "run.n_list", "comma-separated N values"},
    {"--bq-list", "run.bq_list", "comma-separated b_q values"},
    {"--delta-list", "run.delta_list", "comma-separated delta values"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TinyML-filtered IoT image retrieval: energy/accuracy model and simulator"};

  std::string mode;
  std::string config_path;
  std::string seed, trials, out;
  std::vector<std::string> sets;
  std::vector<std::string> flag_values(std::size(kScenarioFlags));

  app.add_option("mode", mode, "analyze | simulate | optimize | figure2 | figure3 (default: run.mode)");
  app.add_option("-c,--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed");
  app.add_option("--trials", trials, "Monte Carlo trials");
  app.add_option("-o,--out", out, "output CSV path (default: $TINYAIRNET_OUT_DIR/<mode>.csv or stdout)");
  app.add_option("--set", sets, "override any config key, e.g. --set scenario.delta=0.98");
  for (std::size_t i = 0; i < std::size(kScenarioFlags); ++i)
    app.add_option(kScenarioFlags[i].name, flag_values[i], kScenarioFlags[i].help);

  CLI11_PARSE(app, argc, argv);

  try {
    tinyairnet::ExperimentConfig cfg =
        config_path.empty() ? tinyairnet::ExperimentConfig{} : tinyairnet::load_config(config_path);

    for (std::size_t i = 0; i < std::size(kScenarioFlags); ++i)
      if (!flag_values[i].empty()) tinyairnet::apply_setting(cfg, kScenarioFlags[i].key, flag_values[i]);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw tinyairnet::ConfigError("--set expects section.key=value, got '" + s + "'");
      tinyairnet::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!seed.empty()) tinyairnet::apply_setting(cfg, "run.seed", seed);
    if (!trials.empty()) tinyairnet::apply_setting(cfg, "run.trials", trials);
    if (!out.empty()) tinyairnet::apply_setting(cfg, "run.out", out);
    if (!mode.empty()) tinyairnet::apply_setting(cfg, "run.mode", mode);
    tinyairnet::require_valid(cfg);

    const std::string csv = tinyairnet::render_csv(tinyairnet::run_mode(cfg));
    if (auto path = tinyairnet::resolve_output_path(cfg, std::getenv(tinyairnet::kOutDirEnv))) {
      tinyairnet::write_file(*path, csv);
      std::cerr << "wrote " << path->string() << '\n';
    } else {
      std::cout << csv;
    }
  } catch (const tinyairnet::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
