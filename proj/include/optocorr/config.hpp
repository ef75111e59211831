#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "optocorr/estimators.hpp"
#include "optocorr/physics.hpp"

namespace optocorr {

inline constexpr int kConfigSchemaVersion = 1;

// Flat key-value configuration. Defaults reproduce the reference setup.
struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  ExperimentParams params;
  std::size_t runs = 500;
  SweepMode mode = SweepMode::moments;
  std::size_t hist_bins = 64;
  double hist_sigma = 4.0;
  std::string output_dir;
  std::string run_dir;
  std::vector<std::string> overrides;  // key=value strings in application order
};

// Every accepted key, in canonical order.
const std::vector<std::string>& config_keys();

// Strict: unknown keys and ill-typed values raise ConfigError naming the key.
void apply_json(RunConfig& config, const nlohmann::ordered_json& doc);
void apply_override(RunConfig& config, std::string_view assignment);

// Parses a JSON config file, or the "config" member of a manifest written by
// a previous command.
RunConfig load_config_file(const std::filesystem::path& path);
RunConfig parse_config_text(std::string_view text, std::string_view origin = "<config>");

// Canonical JSON of every key except output_dir and run_dir.
nlohmann::ordered_json config_to_json(const RunConfig& config);
std::string config_digest(const RunConfig& config);

}  // namespace optocorr
