#pragma once

// Experiment configuration: an INI file with sections [model], [radio],
// [image], [scenario] and [run]. Keys not present keep their preset value.
//
//   [model]    preset = etinynet1.0 | n_s n_c a_s l_f b_q b_max
//   [radio]    preset = nbiot | r_dl r_ul xi_t xi_r b_h b_h_ml b_h_f b_ml
//   [image]    m_c m_h m_w b_in
//   [scenario] n_images delta v_th gamma_th similarity(=uniform) sigma_ml
//   [run]      mode trials seed threads out grid_step
//              vth_grid n_list bq_list delta_list   (comma separated)

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "tinyairnet/optimize.hpp"
#include "tinyairnet/profiles.hpp"

namespace tinyairnet {

enum class Mode { analyze, simulate, optimize, figure2, figure3 };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::analyze: return "analyze";
    case Mode::simulate: return "simulate";
    case Mode::optimize: return "optimize";
    case Mode::figure2: return "figure2";
    case Mode::figure3: return "figure3";
  }
  return "?";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : {Mode::analyze, Mode::simulate, Mode::optimize, Mode::figure2, Mode::figure3})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

// Threshold grid used for the energy/accuracy trade-off figure: 30 points
// from 0.4140625 to 0.98046875 in steps of 5/256.
inline std::vector<double> figure2_grid() {
  std::vector<double> g;
  for (int k = 0; k < 30; ++k) g.push_back((106.0 + 5.0 * k) / 256.0);
  return g;
}

inline std::vector<std::uint64_t> figure3_n_list() {
  std::vector<std::uint64_t> n;
  for (std::uint64_t v = 2; v <= 50; v += 2) n.push_back(v);
  return n;
}

struct ExperimentConfig {
  Scenario scenario = presets::default_scenario();
  std::string model_preset{"etinynet1.0"};
  std::string radio_preset{"nbiot"};
  Mode mode{Mode::analyze};
  std::vector<double> v_th_grid = figure2_grid();
  std::vector<std::uint64_t> n_list = figure3_n_list();
  std::vector<double> b_q_list{8.0, 16.0};
  std::vector<double> delta_list{0.90, 0.98};
  double grid_step{kDefaultGridStep};
  std::uint64_t n_trials{10000};
  std::uint64_t master_seed{20240101};
  unsigned threads{1};
  std::string out_path;

  bool operator==(const ExperimentConfig&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_real(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
    throw ConfigError(fmt::format("invalid value for '{}': expected a number, got '{}'", key, t));
  return v;
}

inline std::uint64_t parse_uint(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
    throw ConfigError(fmt::format("invalid value for '{}': expected a non-negative integer, got '{}'", key, t));
  return v;
}

inline std::uint32_t parse_u32(const std::string& key, std::string_view text) {
  const std::uint64_t v = parse_uint(key, text);
  if (v > 0xffffffffULL) throw ConfigError(fmt::format("invalid value for '{}': out of range", key));
  return static_cast<std::uint32_t>(v);
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& key, std::string_view text, Parse parse) {
  std::vector<T> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) out.push_back(parse(key, item));
  if (out.empty()) throw ConfigError(fmt::format("invalid value for '{}': list is empty", key));
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>) s += fmt::format("{:.17g}", xs[i]);
    else s += fmt::format("{}", xs[i]);
  }
  return s;
}

}  // namespace detail

// Applies one `section.key = value` setting. Shared by the file loader and
// command-line overrides. Throws ConfigError naming the key on failure.
inline void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  using namespace detail;
  const std::string value = trim(raw);
  auto& s = cfg.scenario;
  auto& m = s.model;
  auto& r = s.radio;
  auto& im = s.image;

  if (key == "model.preset") {
    auto p = presets::model_by_name(value);
    if (!p) throw ConfigError(fmt::format("unknown preset for 'model.preset': '{}'", value));
    const double b_q = m.b_q;
    m = *p;
    m.b_q = b_q;
    cfg.model_preset = value;
  } else if (key == "model.n_s") m.n_s = parse_real(key, value);
  else if (key == "model.n_c") m.n_c = parse_real(key, value);
  else if (key == "model.a_s") m.a_s = parse_real(key, value);
  else if (key == "model.l_f") m.l_f = parse_real(key, value);
  else if (key == "model.b_q") m.b_q = parse_real(key, value);
  else if (key == "model.b_max") m.b_max = parse_real(key, value);
  else if (key == "radio.preset") {
    auto p = presets::radio_by_name(value);
    if (!p) throw ConfigError(fmt::format("unknown preset for 'radio.preset': '{}'", value));
    r = *p;
    cfg.radio_preset = value;
  } else if (key == "radio.r_dl") r.r_dl = parse_real(key, value);
  else if (key == "radio.r_ul") r.r_ul = parse_real(key, value);
  else if (key == "radio.xi_t") r.xi_t = parse_real(key, value);
  else if (key == "radio.xi_r") r.xi_r = parse_real(key, value);
  else if (key == "radio.b_h") r.b_h = parse_real(key, value);
  else if (key == "radio.b_h_ml") r.b_h_ml = parse_real(key, value);
  else if (key == "radio.b_h_f") r.b_h_f = parse_real(key, value);
  else if (key == "radio.b_ml") r.b_ml = parse_real(key, value);
  else if (key == "image.m_c") im.m_c = parse_u32(key, value);
  else if (key == "image.m_h") im.m_h = parse_u32(key, value);
  else if (key == "image.m_w") im.m_w = parse_u32(key, value);
  else if (key == "image.b_in") im.b_in = parse_u32(key, value);
  else if (key == "scenario.n_images") s.n_images = parse_uint(key, value);
  else if (key == "scenario.delta") s.delta = parse_real(key, value);
  else if (key == "scenario.v_th") s.v_th = parse_real(key, value);
  else if (key == "scenario.gamma_th") s.gamma_th = parse_real(key, value);
  else if (key == "scenario.similarity") {
    if (value != "uniform") throw ConfigError(fmt::format("unknown distribution for 'scenario.similarity': '{}'", value));
    s.similarity = SimilarityDistribution::uniform();
  } else if (key == "scenario.sigma_ml") {
    if (value.empty() || value == "auto") s.sigma_override.reset();
    else s.sigma_override = parse_real(key, value);
  } else if (key == "run.mode") {
    auto md = parse_mode(value);
    if (!md) throw ConfigError(fmt::format("unknown mode for 'run.mode': '{}'", value));
    cfg.mode = *md;
  } else if (key == "run.trials") cfg.n_trials = parse_uint(key, value);
  else if (key == "run.seed") cfg.master_seed = parse_uint(key, value);
  else if (key == "run.threads") cfg.threads = parse_u32(key, value);
  else if (key == "run.out") cfg.out_path = value;
  else if (key == "run.grid_step") cfg.grid_step = parse_real(key, value);
  else if (key == "run.vth_grid") cfg.v_th_grid = parse_list<double>(key, value, parse_real);
  else if (key == "run.n_list") cfg.n_list = parse_list<std::uint64_t>(key, value, parse_uint);
  else if (key == "run.bq_list") cfg.b_q_list = parse_list<double>(key, value, parse_real);
  else if (key == "run.delta_list") cfg.delta_list = parse_list<double>(key, value, parse_real);
  else throw ConfigError(fmt::format("unknown configuration key '{}'", key));
}

// Checks cross-field invariants. Returns one message per violation.
inline std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> out = validate(cfg.scenario);
  if (cfg.v_th_grid.empty() || cfg.n_list.empty() || cfg.b_q_list.empty() || cfg.delta_list.empty())
    out.emplace_back("run: sweep axes must be non-empty");
  for (double v : cfg.v_th_grid)
    if (!(v >= 0.0 && v <= 1.0)) out.emplace_back("run.vth_grid: values must lie in [0,1]");
  for (double d : cfg.delta_list)
    if (!(d >= 0.0 && d < 1.0)) out.emplace_back("run.delta_list: values must lie in [0,1)");
  for (double b : cfg.b_q_list)
    if (!(b >= 1.0 && b <= cfg.scenario.model.b_max)) out.emplace_back("run.bq_list: values must lie in [1, b_max]");
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i)
    if (cfg.n_list[i] == 0 || (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1]))
      out.emplace_back("run.n_list: values must be positive and ascending");
  if (!(cfg.grid_step > 0.0 && cfg.grid_step <= 1.0)) out.emplace_back("run.grid_step: must lie in (0,1]");
  if ((cfg.mode == Mode::simulate || cfg.mode == Mode::figure2) && cfg.n_trials < 1)
    out.emplace_back("run.trials: must be >= 1 for simulation modes");
  return out;
}

inline void require_valid(const ExperimentConfig& cfg) {
  const auto problems = validate(cfg);
  if (problems.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw ConfigError(msg);
}

// Parses INI text. Preset keys are applied before the explicit overrides in
// their section, so `preset` may appear anywhere.
inline ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>") {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("{}:{}: parse error: {}", source, e.line(), e.message()));
  }

  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(fmt::format("{}: key '{}' must be inside a section", source, section));
    static const std::vector<std::string> known{"model", "radio", "image", "scenario", "run"};
    if (std::find(known.begin(), known.end(), section) == known.end())
      throw ConfigError(fmt::format("{}: unknown section '[{}]'", source, section));
  }
  for (const char* section : {"model", "radio"}) {
    if (auto body = tree.get_child_optional(section))
      if (auto p = body->get_optional<std::string>("preset"))
        apply_setting(cfg, std::string(section) + ".preset", *p);
  }
  for (const auto& [section, body] : tree) {
    for (const auto& [key, value] : body) {
      if (key == "preset") continue;
      apply_setting(cfg, section + "." + key, value.data());
    }
  }
  require_valid(cfg);
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

// Serializes every field explicitly; parse_config(to_config_string(c)) == c.
// With include_execution = false, settings that cannot change results
// (threads, out) are left out.
inline std::string to_config_string(const ExperimentConfig& cfg, bool include_execution = true) {
  const auto& s = cfg.scenario;
  const auto& m = s.model;
  const auto& r = s.radio;
  const auto& im = s.image;
  std::string o;
  auto line = [&o](std::string_view k, const auto& v) {
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) o += fmt::format("{} = {:.17g}\n", k, v);
    else o += fmt::format("{} = {}\n", k, v);
  };
  o += "[model]\n";
  line("preset", cfg.model_preset);
  line("n_s", m.n_s);
  line("n_c", m.n_c);
  line("a_s", m.a_s);
  line("l_f", m.l_f);
  line("b_q", m.b_q);
  line("b_max", m.b_max);
  o += "\n[radio]\n";
  line("preset", cfg.radio_preset);
  line("r_dl", r.r_dl);
  line("r_ul", r.r_ul);
  line("xi_t", r.xi_t);
  line("xi_r", r.xi_r);
  line("b_h", r.b_h);
  line("b_h_ml", r.b_h_ml);
  line("b_h_f", r.b_h_f);
  line("b_ml", r.b_ml);
  o += "\n[image]\n";
  line("m_c", im.m_c);
  line("m_h", im.m_h);
  line("m_w", im.m_w);
  line("b_in", im.b_in);
  o += "\n[scenario]\n";
  line("n_images", s.n_images);
  line("delta", s.delta);
  line("v_th", s.v_th);
  line("gamma_th", s.gamma_th);
  line("similarity", s.similarity.name());
  if (s.sigma_override) line("sigma_ml", *s.sigma_override);
  o += "\n[run]\n";
  line("mode", to_string(cfg.mode));
  line("trials", cfg.n_trials);
  line("seed", cfg.master_seed);
  if (include_execution) {
    line("threads", cfg.threads);
    if (!cfg.out_path.empty()) line("out", cfg.out_path);
  }
  line("grid_step", cfg.grid_step);
  line("vth_grid", detail::join(cfg.v_th_grid));
  line("n_list", detail::join(cfg.n_list));
  line("bq_list", detail::join(cfg.b_q_list));
  line("delta_list", detail::join(cfg.delta_list));
  return o;
}

}  // namespace tinyairnet
