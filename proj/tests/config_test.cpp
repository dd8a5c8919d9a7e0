#include <gtest/gtest.h>

#include <string>

#include "tinyairnet/config.hpp"

namespace tinyairnet {
namespace {

TEST(Config, MinimalFileGetsDefaults) {
  const ExperimentConfig cfg = parse_config("[run]\nmode = figure2\n");
  EXPECT_EQ(cfg.mode, Mode::figure2);
  EXPECT_EQ(cfg.scenario, presets::default_scenario());
  EXPECT_EQ(cfg.n_trials, 10000u);
  EXPECT_EQ(cfg.v_th_grid.size(), 30u);
  EXPECT_EQ(cfg.v_th_grid.front(), 0.4140625);
  EXPECT_EQ(cfg.v_th_grid.back(), 0.98046875);
}

TEST(Config, QuantizationOverrideSetsSigma) {
  const ExperimentConfig cfg = parse_config("[model]\nb_q = 8\n");
  EXPECT_EQ(cfg.scenario.sigma_ml(), 0.125);
  EXPECT_EQ(parse_config("[model]\nb_q = 16\n").scenario.sigma_ml(), 0.0625);
}

TEST(Config, PresetAppliedBeforeOverridesRegardlessOfOrder) {
  const ExperimentConfig cfg = parse_config("[radio]\nxi_t = 0.2\npreset = nbiot\n");
  EXPECT_EQ(cfg.scenario.radio.xi_t, 0.2);
  EXPECT_EQ(cfg.scenario.radio.xi_r, 0.160);
}

TEST(Config, UnknownPresetIsRejected) {
  try {
    parse_config("[model]\npreset = resnet50\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("model.preset"), std::string::npos);
  }
}

TEST(Config, ErrorsNameTheOffendingKey) {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("[scenario]\ndelta = abc\n").find("scenario.delta"), std::string::npos);
  EXPECT_NE(message("[scenario]\nbogus = 1\n").find("scenario.bogus"), std::string::npos);
  EXPECT_NE(message("[weird]\nx = 1\n").find("weird"), std::string::npos);
  EXPECT_NE(message("[scenario]\ndelta = 1.5\n").find("[0,1]"), std::string::npos);
  EXPECT_NE(message("[run]\nmode = dance\n").find("run.mode"), std::string::npos);
  EXPECT_NE(message("[run]\nn_list = 4, 2\n").find("run.n_list"), std::string::npos);
  EXPECT_NE(message("[image]\nm_c = -3\n").find("image.m_c"), std::string::npos);
}

TEST(Config, ParseErrorsCarryLineNumbers) {
  try {
    parse_config("[model]\nb_q = 8\nthis line is broken\n", "exp.ini");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("exp.ini:3"), std::string::npos) << e.what();
  }
}

TEST(Config, SimulationNeedsTrials) {
  EXPECT_THROW(parse_config("[run]\nmode = simulate\ntrials = 0\n"), ConfigError);
  EXPECT_NO_THROW(parse_config("[run]\nmode = optimize\ntrials = 0\n"));
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/cfg.ini"), ConfigError); }

TEST(Config, RoundTripPreservesEveryField) {
  ExperimentConfig cfg;
  cfg.scenario.model.n_s = 123456.789012345678;
  cfg.scenario.model.b_q = 12;
  cfg.scenario.radio.r_dl = 1.0 / 3.0;
  cfg.scenario.radio.b_h = 96;
  cfg.scenario.image = ImageSpec{1, 4000000000u, 1, 16};
  cfg.scenario.n_images = 18446744073709551615ull;
  cfg.scenario.delta = 0.1 + 0.2;
  cfg.scenario.v_th = std::nextafter(0.5, 1.0);
  cfg.scenario.sigma_override = 1e-300;
  cfg.mode = Mode::figure3;
  cfg.v_th_grid = {0.1, 2.0 / 3.0};
  cfg.n_list = {1, 7, 9};
  cfg.b_q_list = {4};
  cfg.delta_list = {0.5, 0.75};
  cfg.grid_step = 1.0 / 1024;
  cfg.n_trials = 17;
  cfg.master_seed = 0xdeadbeefcafef00dull;
  cfg.threads = 3;
  cfg.out_path = "out/x.csv";
  const std::string text = to_config_string(cfg);
  EXPECT_EQ(parse_config(text), cfg) << text;
  EXPECT_EQ(parse_config(to_config_string(ExperimentConfig{})), ExperimentConfig{});
}

TEST(Config, ApplySettingOverridesFile) {
  ExperimentConfig cfg = parse_config("[scenario]\ndelta = 0.9\n");
  apply_setting(cfg, "scenario.delta", "0.98");
  EXPECT_EQ(cfg.scenario.delta, 0.98);
  apply_setting(cfg, "scenario.sigma_ml", "auto");
  EXPECT_FALSE(cfg.scenario.sigma_override.has_value());
  EXPECT_THROW(apply_setting(cfg, "nope", "1"), ConfigError);
}

TEST(Config, ShippedFilesLoad) {
  const std::string dir = TINYAIRNET_CONFIG_DIR;
  const ExperimentConfig f2 = load_config(dir + "/figure2.ini");
  EXPECT_EQ(f2.mode, Mode::figure2);
  EXPECT_EQ(f2.scenario, presets::default_scenario());
  EXPECT_EQ(f2.v_th_grid, figure2_grid());
  EXPECT_EQ(f2.threads, 0u);

  const ExperimentConfig f3 = load_config(dir + "/figure3.ini");
  EXPECT_EQ(f3.mode, Mode::figure3);
  EXPECT_EQ(f3.n_list, figure3_n_list());
  EXPECT_EQ(f3.grid_step, 1.0 / 256.0);

  EXPECT_EQ(load_config(dir + "/single.ini").mode, Mode::analyze);
}

}  // namespace
}  // namespace tinyairnet
