#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tpp/harness.hpp"

namespace tpp {

/// One preset: ordered key/value pairs as they appear in the file.
using PresetSection = std::vector<std::pair<std::string, std::string>>;

/// Sectioned key=value config file. Full-line comments start with '#' or
/// ';'; duplicate section names and duplicate keys within a section are
/// rejected.
struct PresetFile {
  std::vector<std::pair<std::string, PresetSection>> sections;

  const PresetSection* find(const std::string& name) const;
  std::vector<std::string> names() const;

  static PresetFile parse(const std::filesystem::path& path);
  static PresetFile parse_text(const std::string& text);
};

/// ExperimentConfig under assembly. Tracks whether alpha and beta were set
/// explicitly: two-phase runs refuse to fall back to defaults for the
/// phase-2 combination weights.
struct ExperimentSpec {
  ExperimentConfig cfg;
  bool alpha_set = false;
  bool beta_set = false;

  /// Applies one key=value assignment. Unknown keys and malformed values
  /// throw ConfigError.
  void set(const std::string& key, const std::string& value);

  void apply(const PresetSection& section);

  /// Cross-field validation; call once assembly is complete.
  void finalize() const;
};

} // namespace tpp
