#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "quadsim/engine.hpp"

namespace quadsim {

struct ConfigIssue {
  enum class Severity { kError, kWarning };

  Severity severity = Severity::kError;
  std::string field;  // "section.key"
  std::string message;
};

struct ConfigLoad {
  SimulationConfig config;
  std::vector<ConfigIssue> issues;
  bool cap_derived = true;  // per_area_cap came from the n_nodes/p default

  bool ok() const;
};

/// Parses INI text, applies `overrides` ("section.key=value", later wins),
/// then derives defaults and cross-checks. Never throws for bad values; every
/// problem lands in `issues`.
ConfigLoad parse_config(std::string_view ini_text, const std::vector<std::string>& overrides = {});

/// As parse_config on the file contents. Throws IoError if unreadable.
ConfigLoad load_config_file(const std::filesystem::path& path,
                            const std::vector<std::string>& overrides = {});

/// Resolved values as INI text that parse_config accepts back.
std::string render_config(const SimulationConfig& cfg);

/// Hex FNV-1a hash of the rendered config with seed and protocol blanked, so
/// every run of a sweep shares it.
std::string config_fingerprint(const SimulationConfig& cfg);

}  // namespace quadsim
