#include "flex/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "flex/errors.hpp"

namespace flex::cli {

namespace pt = boost::property_tree;

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string format_number(float value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_value(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty())
    throw ConfigError("config: cannot parse '" + text + "' for key '" + key + "'");
  return value;
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_value<double>(key, item));
  if (out.empty()) throw ConfigError("config: key '" + key + "' needs at least one value");
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += format_number(values[i]);
  }
  return s;
}

std::vector<ModulationMode> parse_modes(const std::string& raw) {
  std::vector<ModulationMode> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_mode(trim(item)));
  if (out.empty()) throw ConfigError("config: simulate.modes is empty");
  return out;
}

std::string join_modes(const std::vector<ModulationMode>& modes) {
  std::string s;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i) s += ',';
    s += to_string(modes[i]);
  }
  return s;
}

struct Field {
  const char* section;
  const char* key;
  std::function<std::string(const AppConfig&)> get;
  std::function<void(AppConfig&, const std::string&)> set;
};

template <typename T, typename Access>
Field number_field(const char* section, const char* key, Access access) {
  return {section, key,
          [access](const AppConfig& c) {
            const T v = access(c);
            if constexpr (std::is_floating_point_v<T>)
              return format_number(v);
            else
              return std::to_string(v);
          },
          [access, key](AppConfig& c, const std::string& raw) {
            access(c) = parse_value<T>(key, raw);
          }};
}

template <typename Access>
Field list_field(const char* section, const char* key, Access access) {
  return {section, key, [access](const AppConfig& c) { return join(access(c)); },
          [access, key](AppConfig& c, const std::string& raw) { access(c) = parse_list(key, raw); }};
}

#define FLEX_REF(expr) [](auto& c) -> auto& { return expr; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      number_field<int>("rope", "dim", FLEX_REF(c.pipeline.rope.dim)),
      number_field<double>("rope", "base", FLEX_REF(c.pipeline.rope.base)),
      number_field<int>("rope", "train_len", FLEX_REF(c.pipeline.rope.train_len)),
      number_field<double>("rope", "alpha", FLEX_REF(c.pipeline.rope.alpha)),
      number_field<double>("rope", "beta", FLEX_REF(c.pipeline.rope.beta)),

      number_field<double>("noise", "rho", FLEX_REF(c.pipeline.ans.rho)),
      number_field<std::uint64_t>("noise", "seed", FLEX_REF(c.pipeline.ans.seed)),

      number_field<int>("cache", "window", FLEX_REF(c.pipeline.window)),
      number_field<int>("cache", "chunk", FLEX_REF(c.pipeline.ans.frames)),
      number_field<int>("cache", "sink", FLEX_REF(c.pipeline.sink)),

      {"model", "mode", [](const AppConfig& c) { return std::string(to_string(c.pipeline.mode)); },
       [](AppConfig& c, const std::string& raw) { c.pipeline.mode = parse_mode(trim(raw)); }},
      number_field<int>("model", "target_len", FLEX_REF(c.pipeline.target_len)),
      number_field<int>("model", "steps", FLEX_REF(c.pipeline.schedule.steps)),
      number_field<double>("model", "step_gain", FLEX_REF(c.pipeline.schedule.step_gain)),
      number_field<std::uint64_t>("model", "seed", FLEX_REF(c.pipeline.model_seed)),

      {"simulate", "modes", [](const AppConfig& c) { return join_modes(c.modes); },
       [](AppConfig& c, const std::string& raw) { c.modes = parse_modes(raw); }},

      number_field<std::size_t>("verify", "chunks", FLEX_REF(c.verify.chunks)),
      number_field<int>("verify", "energy_frames", FLEX_REF(c.verify.energy_frames)),
      number_field<int>("verify", "energy_dim", FLEX_REF(c.verify.energy_dim)),
      list_field("verify", "rho_grid", FLEX_REF(c.verify.rho_grid)),
      number_field<int>("verify", "cov_frames", FLEX_REF(c.verify.cov_frames)),
      number_field<int>("verify", "cov_dim", FLEX_REF(c.verify.cov_dim)),
      list_field("verify", "cov_rho_grid", FLEX_REF(c.verify.cov_rho_grid)),
      list_field("verify", "psd_rho_grid", FLEX_REF(c.verify.psd_rho_grid)),
      number_field<std::size_t>("verify", "psd_length", FLEX_REF(c.verify.psd_length)),
      number_field<int>("verify", "psd_dim", FLEX_REF(c.verify.psd_dim)),
      number_field<std::size_t>("verify", "psd_segment", FLEX_REF(c.verify.psd_segment)),
      list_field("verify", "parseval_rho_grid", FLEX_REF(c.verify.parseval_rho_grid)),
      number_field<std::size_t>("verify", "quadrature_points", FLEX_REF(c.verify.quadrature_points)),
      number_field<std::uint64_t>("verify", "seed", FLEX_REF(c.verify.seed)),
      number_field<double>("verify", "energy_rel_tol", FLEX_REF(c.verify.energy_rel_tol)),
      number_field<double>("verify", "cov_abs_tol", FLEX_REF(c.verify.cov_abs_tol)),
      number_field<double>("verify", "mean_abs_tol", FLEX_REF(c.verify.mean_abs_tol)),
      number_field<double>("verify", "var_tol", FLEX_REF(c.verify.var_tol)),
      number_field<double>("verify", "psd_rel_l2_tol", FLEX_REF(c.verify.psd_rel_l2_tol)),
      number_field<double>("verify", "endpoint_tol", FLEX_REF(c.verify.endpoint_tol)),
      number_field<double>("verify", "parseval_tol", FLEX_REF(c.verify.parseval_tol)),
  };
  return table;
}

#undef FLEX_REF

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields())
    if (section == f.section && key == f.key) return &f;
  return nullptr;
}

AppConfig from_tree(const pt::ptree& tree, AppConfig config) {
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("config: key '" + section + "' outside of a [section]");
    for (const auto& [key, value] : body) {
      const Field* field = find_field(section, key);
      if (!field) throw ConfigError("config: unknown key [" + section + "] " + key);
      field->set(config, value.data());
    }
  }
  config.validate();
  return config;
}

void check_rho_grid(const std::vector<double>& grid, const char* name, bool open) {
  for (double rho : grid) {
    if (!std::isfinite(rho) || std::abs(rho) > 1.0)
      throw ParameterError(std::string("verify: ") + name + " entry outside [-1, 1]");
    if (open && std::abs(rho) >= 1.0)
      throw ParameterError(std::string("verify: ") + name + " entries must satisfy |rho| < 1");
  }
}

}  // namespace

void VerifyConfig::validate() const {
  if (chunks < kMinCovarianceChunks) throw ConfigError("verify: chunks must be >= 1000");
  if (energy_frames < 2 || energy_dim < 1 || cov_frames < 1 || cov_dim < 1 || psd_dim < 1)
    throw ConfigError("verify: frame and dim settings must be positive (energy_frames >= 2)");
  check_rho_grid(rho_grid, "rho_grid", false);
  check_rho_grid(cov_rho_grid, "cov_rho_grid", false);
  check_rho_grid(psd_rho_grid, "psd_rho_grid", true);
  check_rho_grid(parseval_rho_grid, "parseval_rho_grid", true);
  if (psd_segment < 16 || (psd_segment & (psd_segment - 1)) != 0)
    throw ConfigError("verify: psd_segment must be a power of two >= 16");
  if (psd_length < psd_segment) throw ConfigError("verify: psd_length must be >= psd_segment");
  if (quadrature_points < 64) throw ConfigError("verify: quadrature_points must be >= 64");
  for (double tol : {energy_rel_tol, cov_abs_tol, mean_abs_tol, var_tol, psd_rel_l2_tol,
                     endpoint_tol, parseval_tol})
    if (!(tol >= 0.0)) throw ConfigError("verify: tolerances must be >= 0");
}

void AppConfig::validate() const {
  pipeline.validate();
  verify.validate();
  if (modes.empty()) throw ConfigError("simulate: at least one mode is required");
}

std::vector<ConfigSection> to_sections(const AppConfig& config) {
  std::vector<ConfigSection> out;
  for (const auto& f : fields()) {
    if (out.empty() || out.back().first != f.section) out.push_back({f.section, {}});
    out.back().second.emplace_back(f.key, f.get(config));
  }
  return out;
}

std::string to_ini(const AppConfig& config) {
  std::string s;
  for (const auto& [section, entries] : to_sections(config)) {
    if (!s.empty()) s += '\n';
    s += "[" + section + "]\n";
    for (const auto& [key, value] : entries) s += key + " = " + value + "\n";
  }
  return s;
}

AppConfig load_config(const std::filesystem::path& path, const AppConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());

  pt::ptree tree;
  if (path.extension() == ".json") {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config: malformed JSON in " + path.string() + ": " + e.what());
    }
    const auto& cfg = doc.contains("config") ? doc["config"] : doc;
    if (!cfg.is_object()) throw ConfigError("config: JSON config must be an object");
    for (const auto& [section, body] : cfg.items()) {
      if (!body.is_object()) throw ConfigError("config: section '" + section + "' is not an object");
      for (const auto& [key, value] : body.items())
        tree.put(pt::ptree::path_type(section + "." + key, '.'),
                 value.is_string() ? value.get<std::string>() : value.dump());
    }
  } else {
    try {
      pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError("config: malformed INI in " + path.string() + ": " + e.message());
    }
  }
  return from_tree(tree, base);
}

AppConfig preset_config(const std::string& name) {
  AppConfig config;
  if (name == "default") return config;
  if (name == "longlive") {
    config.pipeline.rope.train_len = 240;
    config.pipeline.rope.alpha = 1.0;
    config.pipeline.rope.beta = 15.0;
    config.pipeline.ans.rho = -1.0;
    config.pipeline.target_len = 960;
    return config;
  }
  throw ConfigError("unknown preset '" + name + "' (expected default|longlive)");
}

void apply_overrides(AppConfig& config, const Overrides& o) {
  if (o.seed) {
    config.pipeline.ans.seed = *o.seed;
    config.pipeline.model_seed = *o.seed;
    config.verify.seed = *o.seed;
  }
  if (o.mode) {
    config.pipeline.mode = parse_mode(*o.mode);
    config.modes = {config.pipeline.mode};
  }
  if (o.rho) config.pipeline.ans.rho = *o.rho;
  if (o.target_len) config.pipeline.target_len = *o.target_len;
  config.validate();
}

}  // namespace flex::cli
