#include "tpp/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tpp/errors.hpp"

namespace tpp {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last)
    throw ConfigError("invalid value for " + key + ": '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("invalid value for " + key + ": '" + value +
                    "' (expected true/false)");
}

} // namespace

const PresetSection* PresetFile::find(const std::string& name) const {
  for (const auto& [section_name, section] : sections)
    if (section_name == name) return &section;
  return nullptr;
}

std::vector<std::string> PresetFile::names() const {
  std::vector<std::string> out;
  out.reserve(sections.size());
  for (const auto& [name, section] : sections) out.push_back(name);
  return out;
}

PresetFile PresetFile::parse(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_text(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

PresetFile PresetFile::parse_text(const std::string& text) {
  PresetFile file;
  PresetSection* current = nullptr;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    const std::string where = "line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(where + ": unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError(where + ": empty section name");
      if (file.find(name))
        throw ConfigError(where + ": duplicate section '" + name + "'");
      file.sections.emplace_back(name, PresetSection{});
      current = &file.sections.back().second;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!current)
      throw ConfigError(where + ": key '" + key + "' outside any section");
    const auto dup = std::find_if(current->begin(), current->end(),
                                  [&](const auto& kv) { return kv.first == key; });
    if (dup != current->end())
      throw ConfigError(where + ": duplicate key '" + key + "'");
    current->emplace_back(key, value);
  }
  return file;
}

void ExperimentSpec::set(const std::string& key, const std::string& value) {
  if (key == "problem") {
    cfg.problem = value;
  } else if (key == "method") {
    if (value == "adam")
      cfg.method = Method::Adam;
    else if (value == "two-phase")
      cfg.method = Method::TwoPhase;
    else
      throw ConfigError("invalid method: '" + value +
                        "' (expected adam or two-phase)");
  } else if (key == "l1") {
    if (value == "mse_f")
      cfg.l1_is_residual = true;
    else if (value == "mse_u")
      cfg.l1_is_residual = false;
    else
      throw ConfigError("invalid l1 role: '" + value +
                        "' (expected mse_f or mse_u)");
  } else if (key == "hidden_layers") {
    cfg.hidden_layers = parse_number<int>(key, value);
  } else if (key == "hidden_width") {
    cfg.hidden_width = parse_number<int>(key, value);
  } else if (key == "data_points") {
    cfg.n_data = parse_number<int>(key, value);
  } else if (key == "collocation_points") {
    cfg.n_collocation = parse_number<int>(key, value);
  } else if (key == "budget") {
    cfg.budget = parse_number<long>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "learning_rate") {
    cfg.adam.learning_rate = parse_number<double>(key, value);
  } else if (key == "beta1") {
    cfg.adam.beta1 = parse_number<double>(key, value);
  } else if (key == "beta2") {
    cfg.adam.beta2 = parse_number<double>(key, value);
  } else if (key == "epsilon") {
    cfg.adam.epsilon = parse_number<double>(key, value);
  } else if (key == "r") {
    cfg.ir.r = parse_number<double>(key, value);
  } else if (key == "theta0") {
    cfg.ir.theta0 = parse_number<double>(key, value);
  } else if (key == "theta_min") {
    cfg.ir.theta_min = parse_number<double>(key, value);
  } else if (key == "it_max") {
    cfg.ir.it_max = parse_number<int>(key, value);
  } else if (key == "alpha") {
    cfg.ir.alpha = parse_number<double>(key, value);
    alpha_set = true;
  } else if (key == "beta") {
    cfg.ir.beta = parse_number<double>(key, value);
    beta_set = true;
  } else if (key == "forcing") {
    if (value == "mixed")
      cfg.ir.forcing = ForcingVariant::Mixed;
    else if (value == "squared")
      cfg.ir.forcing = ForcingVariant::Squared;
    else if (value == "complement")
      cfg.ir.forcing = ForcingVariant::Complement;
    else
      throw ConfigError("invalid forcing variant: '" + value +
                        "' (expected mixed, squared or complement)");
  } else if (key == "reset_adam_each_phase") {
    cfg.ir.reset_adam_each_phase = parse_bool(key, value);
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else if (key == "checkpoint_interval") {
    cfg.checkpoint_interval = parse_number<long>(key, value);
  } else if (key == "grid_points") {
    cfg.grid_points = parse_number<int>(key, value);
  } else if (key == "plots") {
    cfg.emit_plots = parse_bool(key, value);
  } else {
    throw ConfigError("unknown config key: '" + key + "'");
  }
}

void ExperimentSpec::apply(const PresetSection& section) {
  for (const auto& [key, value] : section) set(key, value);
}

void ExperimentSpec::finalize() const {
  if (cfg.method == Method::TwoPhase && !(alpha_set && beta_set))
    throw ConfigError(
        "two-phase training requires explicit alpha and beta (set them in "
        "the config preset)");
  cfg.validate();
}

} // namespace tpp
