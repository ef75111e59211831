#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "optocorr/envelope.hpp"
#include "optocorr/estimators.hpp"
#include "optocorr/noise.hpp"
#include "optocorr/physics.hpp"
#include "optocorr/simulation.hpp"

namespace optocorr::io {

using json = nlohmann::ordered_json;

inline constexpr int kRunSchemaVersion = 1;

// Flat JSON key bound to one floating-point field of ExperimentParams.
struct ParamField {
  const char* key;
  double& (*field)(ExperimentParams&);
};

// Physical keys shared by configs, manifests and sidecars (seed excluded).
const std::vector<ParamField>& param_fields();

// 64-bit FNV-1a, lowercase hex.
std::string fnv1a_hex(std::string_view data);

json params_to_json(const ExperimentParams& params);
ExperimentParams params_from_json(const json& j);
std::string params_digest(const ExperimentParams& params);

// Fixed 17-significant-digit formatting so that files round-trip exactly.
std::string format_double(double value);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

// Header: t_seconds,X,Y,unit,center_freq_hz,sample_rate_hz
std::string envelope_csv(const ComplexEnvelope& env);
void write_envelope_csv(const std::filesystem::path& path, const ComplexEnvelope& env);
ComplexEnvelope read_envelope_csv(const std::filesystem::path& path);

json noise_spec_to_json(const NoiseSpec& spec);

// Directory with signal_out.csv, meter_out.csv, meter_displacement.csv, one
// JSON sidecar per envelope and manifest.json. `extra` is merged into the
// manifest.
void write_run_directory(const std::filesystem::path& dir, const RunRecord& record, const json& extra = json::object());
RunRecord read_run_directory(const std::filesystem::path& dir);

json report_to_json(const CorrelationReport& report);
json trace_to_json(const SweepTrace& trace);

// Header: bin_x_center,bin_y_center,probability, preceded by one '#' line
// carrying provenance.
void write_histogram_csv(const std::filesystem::path& path, const PhaseSpaceHistogram& hist,
                         std::string_view provenance);

}  // namespace optocorr::io
