#include "optocorr/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "optocorr/errors.hpp"

namespace optocorr::io {

namespace fs = std::filesystem;

const std::vector<ParamField>& param_fields() {
  static const std::vector<ParamField> fields = {
      {"finesse", [](ExperimentParams& p) -> double& { return p.cavity.finesse; }},
      {"wavelength_m", [](ExperimentParams& p) -> double& { return p.cavity.wavelength; }},
      {"cavity_bandwidth_hz", [](ExperimentParams& p) -> double& { return p.cavity.bandwidth_freq; }},
      {"resonance_freq_hz", [](ExperimentParams& p) -> double& { return p.oscillator.resonance_freq; }},
      {"mass_kg", [](ExperimentParams& p) -> double& { return p.oscillator.mass; }},
      {"quality_factor", [](ExperimentParams& p) -> double& { return p.oscillator.quality_factor; }},
      {"temperature_k", [](ExperimentParams& p) -> double& { return p.temperature; }},
      {"center_freq_hz", [](ExperimentParams& p) -> double& { return p.center_freq; }},
      {"analysis_bandwidth_hz", [](ExperimentParams& p) -> double& { return p.analysis_bandwidth; }},
      {"run_duration_s", [](ExperimentParams& p) -> double& { return p.run_duration; }},
      {"signal_power_w", [](ExperimentParams& p) -> double& { return p.beams.signal_power; }},
      {"meter_power_w", [](ExperimentParams& p) -> double& { return p.beams.meter_power; }},
      {"shot_noise_floor_m_per_rthz", [](ExperimentParams& p) -> double& { return p.beams.shot_noise_floor; }},
      {"shot_floor_reference_power_w", [](ExperimentParams& p) -> double& { return p.beams.shot_reference_power; }},
      {"drive_ratio", [](ExperimentParams& p) -> double& { return p.drive_ratio; }},
      {"drive_bandwidth_hz", [](ExperimentParams& p) -> double& { return p.drive_bandwidth; }},
      {"sample_rate_hz", [](ExperimentParams& p) -> double& { return p.sample_rate; }},
  };
  return fields;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

json params_to_json(const ExperimentParams& params) {
  ExperimentParams copy = params;
  json j = json::object();
  for (const auto& f : param_fields()) j[f.key] = f.field(copy);
  j["seed"] = params.seed;
  return j;
}

ExperimentParams params_from_json(const json& j) {
  ExperimentParams p;
  try {
    for (const auto& f : param_fields()) {
      if (j.contains(f.key)) f.field(p) = j.at(f.key).get<double>();
    }
    if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed parameter block: ") + e.what());
  }
  return p;
}

std::string params_digest(const ExperimentParams& params) { return fnv1a_hex(params_to_json(params).dump()); }

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string envelope_csv(const ComplexEnvelope& env) {
  std::string out = "t_seconds,X,Y,unit,center_freq_hz,sample_rate_hz\n";
  const std::string tail = "," + std::string(to_string(env.unit)) + "," + format_double(env.center_freq) + "," +
                           format_double(env.sample_rate) + "\n";
  out.reserve(out.size() + env.size() * (3 * 25 + tail.size()));
  for (std::size_t i = 0; i < env.size(); ++i) {
    out += format_double(env.time(i));
    out += ',';
    out += format_double(env.samples[i].real());
    out += ',';
    out += format_double(env.samples[i].imag());
    out += tail;
  }
  return out;
}

void write_envelope_csv(const fs::path& path, const ComplexEnvelope& env) { write_text(path, envelope_csv(env)); }

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_number(const std::string& text, const fs::path& path, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + text + "'");
  }
  return v;
}

}  // namespace

ComplexEnvelope read_envelope_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  ComplexEnvelope env;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "t_seconds,X,Y,unit,center_freq_hz,sample_rate_hz") {
        throw IoError(path.string() + ": unexpected envelope header");
      }
      header_seen = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 6) throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 6 fields");
    if (env.empty()) {
      try {
        env.unit = unit_from_string(f[3]);
      } catch (const InvalidSpecError& e) {
        throw IoError(path.string() + ": " + e.what());
      }
      env.center_freq = parse_number(f[4], path, line_no);
      env.sample_rate = parse_number(f[5], path, line_no);
    }
    env.samples.emplace_back(parse_number(f[1], path, line_no), parse_number(f[2], path, line_no));
  }
  if (env.empty()) throw IoError(path.string() + ": no samples");
  return env;
}

json noise_spec_to_json(const NoiseSpec& spec) {
  json j;
  j["bandwidth_hz"] = spec.bandwidth;
  j["target_psd"] = spec.target_psd;
  j["seed"] = spec.seed;
  j["duration_s"] = spec.duration;
  j["sample_rate_hz"] = spec.sample_rate;
  j["center_freq_hz"] = spec.center_freq;
  j["unit"] = to_string(spec.unit);
  return j;
}

namespace {

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

constexpr const char* kChannels[] = {"signal_out", "meter_out", "meter_displacement"};

}  // namespace

void write_run_directory(const fs::path& dir, const RunRecord& record, const json& extra) {
  const auto& p = record.params_snapshot;
  const std::string digest = params_digest(p);
  const ComplexEnvelope* envs[] = {&record.signal_out, &record.meter_out, &record.meter_displacement};

  json specs;
  specs["drive"] = noise_spec_to_json(drive_spec(p));
  specs["thermal"] = noise_spec_to_json(thermal_spec(p));
  specs["thermal"]["profile"] = thermal_uses_exact_profile(p) ? "exact-susceptibility" : "flat";
  specs["shot"] = noise_spec_to_json(shot_spec(p));

  json files = json::array();
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string name = kChannels[i];
    write_envelope_csv(dir / (name + ".csv"), *envs[i]);
    json sidecar;
    sidecar["channel"] = name;
    sidecar["unit"] = to_string(envs[i]->unit);
    sidecar["seed"] = record.seed;
    sidecar["params_digest"] = digest;
    sidecar["n_samples"] = envs[i]->size();
    sidecar["noise_specs"] = i == 0 ? json{{"drive", specs["drive"]}} : specs;
    write_json(dir / (name + ".json"), sidecar);
    files.push_back(name + ".csv");
  }

  json manifest;
  manifest["schema_version"] = kRunSchemaVersion;
  manifest["seed"] = record.seed;
  manifest["params"] = params_to_json(p);
  manifest["params_digest"] = digest;
  manifest["calibration"] = {{"signal_rotation", complex_json(record.signal_rotation)},
                             {"meter_rotation", complex_json(record.meter_rotation)}};
  manifest["acquisition_filter"] = {{"type", "brick-wall"}, {"bandwidth_hz", p.analysis_bandwidth},
                                    {"definition", "half-open band [-B/2, +B/2) on the DFT grid"}};
  manifest["files"] = files;
  for (const auto& [key, value] : extra.items()) manifest[key] = value;
  write_json(dir / "manifest.json", manifest);
}

RunRecord read_run_directory(const fs::path& dir) {
  const json manifest = read_json(dir / "manifest.json");
  RunRecord r;
  try {
    if (manifest.at("schema_version").get<int>() != kRunSchemaVersion) {
      throw IoError(dir.string() + ": unsupported run schema_version");
    }
    r.seed = manifest.at("seed").get<std::uint64_t>();
    r.params_snapshot = params_from_json(manifest.at("params"));
    r.signal_rotation = complex_from_json(manifest.at("calibration").at("signal_rotation"));
    r.meter_rotation = complex_from_json(manifest.at("calibration").at("meter_rotation"));
  } catch (const json::exception& e) {
    throw IoError(dir.string() + "/manifest.json: " + e.what());
  }
  r.signal_out = read_envelope_csv(dir / "signal_out.csv");
  r.meter_out = read_envelope_csv(dir / "meter_out.csv");
  r.meter_displacement = read_envelope_csv(dir / "meter_displacement.csv");
  if (r.signal_out.size() != r.meter_out.size() || r.signal_out.size() != r.meter_displacement.size()) {
    throw IoError(dir.string() + ": channel lengths differ");
  }
  return r;
}

json report_to_json(const CorrelationReport& report) {
  json j;
  j["coefficient"] = report.coefficient;
  j["conditional_dispersion_ratio"] = report.conditional_dispersion_ratio;
  j["signal_variance"] = report.signal_variance;
  j["meter_variance"] = report.meter_variance;
  j["cross_moment"] = complex_json(report.cross_moment);
  j["conditional_variance"] = report.conditional_variance;
  j["n_samples"] = report.n_samples;
  return j;
}

json trace_to_json(const SweepTrace& trace) {
  json j;
  j["mode"] = to_string(trace.mode);
  j["expected_asymptote"] = trace.expected_asymptote;
  j["single_run_sd"] = trace.single_run_sd;
  j["estimate"] = trace.estimate;
  j["half_width"] = trace.half_width;
  j["per_run_coefficient"] = trace.per_run_coefficient;
  return j;
}

void write_histogram_csv(const fs::path& path, const PhaseSpaceHistogram& hist, std::string_view provenance) {
  std::string out = "# " + std::string(provenance) + "\n";
  out += "bin_x_center,bin_y_center,probability\n";
  for (std::size_t iy = 0; iy < hist.grid.bins_y; ++iy) {
    for (std::size_t ix = 0; ix < hist.grid.bins_x; ++ix) {
      out += format_double(hist.bin_center_x(ix));
      out += ',';
      out += format_double(hist.bin_center_y(iy));
      out += ',';
      out += format_double(hist.at(ix, iy));
      out += '\n';
    }
  }
  write_text(path, out);
}

}  // namespace optocorr::io
