#include "optocorr/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "optocorr/errors.hpp"
#include "optocorr/io.hpp"

namespace optocorr {

namespace {

using json = nlohmann::ordered_json;

const std::vector<std::string> kExtraKeys = {"schema_version", "seed", "runs", "mode", "hist_bins",
                                             "hist_sigma", "output_dir", "run_dir"};

[[noreturn]] void bad_value(std::string_view key, std::string_view why) {
  throw ConfigError("config key '" + std::string(key) + "': " + std::string(why));
}

double as_double(const json& v, std::string_view key) {
  if (!v.is_number()) bad_value(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad_value(key, "must be finite");
  return d;
}

std::uint64_t as_unsigned(const json& v, std::string_view key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  bad_value(key, "expected a non-negative integer");
}

std::string as_string(const json& v, std::string_view key) {
  if (!v.is_string()) bad_value(key, "expected a string");
  return v.get<std::string>();
}

const io::ParamField* find_param(std::string_view key) {
  const auto& fields = io::param_fields();
  auto it = std::find_if(fields.begin(), fields.end(), [key](const io::ParamField& f) { return key == f.key; });
  return it == fields.end() ? nullptr : &*it;
}

void set_key(RunConfig& config, const std::string& key, const json& value) {
  if (const auto* field = find_param(key)) {
    field->field(config.params) = as_double(value, key);
  } else if (key == "schema_version") {
    const auto v = as_unsigned(value, key);
    if (v != static_cast<std::uint64_t>(kConfigSchemaVersion)) {
      bad_value(key, "unsupported version " + std::to_string(v));
    }
    config.schema_version = static_cast<int>(v);
  } else if (key == "seed") {
    config.params.seed = as_unsigned(value, key);
  } else if (key == "runs") {
    const auto v = as_unsigned(value, key);
    if (v == 0) bad_value(key, "must be at least 1");
    config.runs = static_cast<std::size_t>(v);
  } else if (key == "mode") {
    try {
      config.mode = sweep_mode_from_string(as_string(value, key));
    } catch (const InvalidSpecError& e) {
      bad_value(key, e.what());
    }
  } else if (key == "hist_bins") {
    const auto v = as_unsigned(value, key);
    if (v == 0 || v > 4096) bad_value(key, "must be in [1, 4096]");
    config.hist_bins = static_cast<std::size_t>(v);
  } else if (key == "hist_sigma") {
    const double v = as_double(value, key);
    if (!(v > 0.0)) bad_value(key, "must be positive");
    config.hist_sigma = v;
  } else if (key == "output_dir") {
    config.output_dir = as_string(value, key);
  } else if (key == "run_dir") {
    config.run_dir = as_string(value, key);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

// Override values are typed by the key they target.
json parse_override_value(const std::string& key, std::string_view text) {
  if (key == "mode" || key == "output_dir" || key == "run_dir") return std::string(text);
  if (find_param(key) || key == "hist_sigma") {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) bad_value(key, "cannot parse '" + std::string(text) + "' as a number");
    return v;
  }
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    bad_value(key, "cannot parse '" + std::string(text) + "' as a non-negative integer");
  }
  return v;
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : io::param_fields()) k.emplace_back(f.key);
    k.insert(k.end(), kExtraKeys.begin(), kExtraKeys.end());
    return k;
  }();
  return keys;
}

void apply_json(RunConfig& config, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) set_key(config, key, value);
}

void apply_override(RunConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const auto& keys = config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown config key '" + key + "'");
  set_key(config, key, parse_override_value(key, assignment.substr(eq + 1)));
  config.overrides.emplace_back(assignment);
}

RunConfig parse_config_text(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(origin) + ":" + std::to_string(line_of_offset(text, e.byte)) +
                      ": JSON syntax error: " + e.what());
  }
  // A manifest written by a previous command carries its resolved config.
  if (doc.is_object() && doc.contains("manifest_kind") && doc.contains("config")) {
    RunConfig config;
    apply_json(config, doc.at("config"));
    if (doc.contains("run_dir") && doc.at("run_dir").is_string()) config.run_dir = doc.at("run_dir").get<std::string>();
    if (doc.contains("overrides")) config.overrides = doc.at("overrides").get<std::vector<std::string>>();
    return config;
  }
  RunConfig config;
  try {
    apply_json(config, doc);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  return config;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return parse_config_text(text, path.string());
}

json config_to_json(const RunConfig& config) {
  json j;
  j["schema_version"] = config.schema_version;
  const json params = io::params_to_json(config.params);
  for (const auto& [key, value] : params.items()) j[key] = value;
  j["runs"] = config.runs;
  j["mode"] = to_string(config.mode);
  j["hist_bins"] = config.hist_bins;
  j["hist_sigma"] = config.hist_sigma;
  return j;
}

std::string config_digest(const RunConfig& config) { return io::fnv1a_hex(config_to_json(config).dump()); }

}  // namespace optocorr
