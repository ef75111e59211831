#include "optocorr/simulation.hpp"

#include <cmath>
#include <exception>

#include "optocorr/errors.hpp"
#include "optocorr/fft.hpp"
#include "optocorr/noise.hpp"

namespace optocorr {

namespace {

void require_compatible(const ComplexEnvelope& a, const ComplexEnvelope& b, const char* what) {
  if (a.size() != b.size() || a.sample_rate != b.sample_rate) {
    throw InvalidSpecError(std::string("duration/sample-rate mismatch: ") + what);
  }
}

ComplexEnvelope from_spectrum(std::vector<std::complex<double>> spectrum, const ComplexEnvelope& like, Unit unit) {
  ComplexEnvelope env;
  env.samples = fft::inverse(spectrum);
  env.sample_rate = like.sample_rate;
  env.center_freq = like.center_freq;
  env.unit = unit;
  return env;
}

ComplexEnvelope rotated(const ComplexEnvelope& env, complex factor) {
  ComplexEnvelope out = env;
  for (auto& z : out.samples) z *= factor;
  return out;
}

complex unit_phase(complex z) { return z / std::abs(z); }

}  // namespace

ComplexEnvelope acquisition_filter(const ComplexEnvelope& env, double bandwidth) {
  if (env.empty()) return env;
  auto spectrum = fft::forward(env.samples);
  const BinBand band = band_bins(bandwidth, env.size(), env.sample_rate);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    if (!band.contains(signed_bin(k, spectrum.size()))) spectrum[k] = 0.0;
  }
  return from_spectrum(std::move(spectrum), env, env.unit);
}

RunComponents propagate(const ExperimentParams& params, const ComplexEnvelope& drive,
                        const ComplexEnvelope& thermal, const ComplexEnvelope& shot) {
  require_compatible(drive, thermal, "drive vs thermal");
  require_compatible(drive, shot, "drive vs shot");
  if (drive.size() != params.sample_count()) throw InvalidSpecError("envelope length does not match run duration");

  const std::size_t n = drive.size();
  const auto drive_f = fft::forward(drive.samples);
  const auto thermal_f = fft::forward(thermal.samples);
  const auto shot_f = fft::forward(shot.samples);
  const BinBand band = band_bins(params.analysis_bandwidth, n, drive.sample_rate);

  std::vector<std::complex<double>> drive_in(n), x_rad(n), x_th(n), x_shot(n), signal(n), meter(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!band.contains(signed_bin(k, n))) continue;
    const double f = params.center_freq + bin_offset(k, n, drive.sample_rate);
    const complex cavity_phase = phase_transfer(params.cavity, f);
    drive_in[k] = drive_f[k];
    x_rad[k] = radiation_displacement_transfer(params, f) * drive_f[k];
    x_th[k] = thermal_f[k];
    x_shot[k] = shot_f[k];
    signal[k] = intensity_reflection(params.cavity, f) * drive_f[k];
    meter[k] = cavity_phase * (x_rad[k] + x_th[k] + x_shot[k]);
  }

  RunComponents out;
  out.drive_in = from_spectrum(std::move(drive_in), drive, Unit::photons_per_second);
  out.radiation_motion = from_spectrum(std::move(x_rad), drive, Unit::meters);
  out.thermal_motion = from_spectrum(std::move(x_th), drive, Unit::meters);
  out.shot_equivalent = from_spectrum(std::move(x_shot), drive, Unit::meters);

  RunRecord& rec = out.record;
  rec.signal_out = from_spectrum(std::move(signal), drive, Unit::photons_per_second);
  rec.meter_out = from_spectrum(std::move(meter), drive, Unit::radians);
  rec.meter_displacement = rotated(rec.meter_out, 1.0 / phase_transfer(params.cavity, params.center_freq));
  rec.meter_displacement.unit = Unit::meters;
  rec.params_snapshot = params;
  rec.seed = params.seed;
  return out;
}

RunComponents simulate_components(const ExperimentParams& params, std::uint64_t seed) {
  ExperimentParams run_params = params;
  run_params.seed = seed;
  run_params.validate();
  return propagate(run_params, gen_drive_envelope(run_params), gen_thermal_envelope(run_params),
                   gen_shot_floor(run_params));
}

RunRecord run_experiment(const ExperimentParams& params, std::uint64_t seed) {
  return std::move(simulate_components(params, seed).record);
}

RunRecord calibrate_meter(const RunRecord& record) {
  const auto& p = record.params_snapshot;
  const double fc = p.center_freq;
  const complex meter_fix =
      std::conj(unit_phase(phase_transfer(p.cavity, fc) * susceptibility(p.oscillator, fc)));
  const complex signal_fix = std::conj(unit_phase(intensity_reflection(p.cavity, fc)));

  RunRecord out = record;
  out.signal_out = rotated(record.signal_out, signal_fix);
  out.meter_out = rotated(record.meter_out, meter_fix);
  out.meter_displacement = rotated(record.meter_displacement, meter_fix);
  out.signal_rotation = record.signal_rotation * signal_fix;
  out.meter_rotation = record.meter_rotation * meter_fix;
  return out;
}

std::vector<RunRecord> run_sweep_serial(const ExperimentParams& params, std::size_t n_runs,
                                        std::uint64_t base_seed) {
  if (n_runs == 0) throw InvalidSpecError("run_sweep: n_runs must be at least 1");
  std::vector<RunRecord> records;
  records.reserve(n_runs);
  for (std::size_t i = 0; i < n_runs; ++i) records.push_back(run_experiment(params, base_seed + i));
  return records;
}

std::vector<RunRecord> run_sweep(const ExperimentParams& params, std::size_t n_runs, std::uint64_t base_seed) {
  if (n_runs == 0) throw InvalidSpecError("run_sweep: n_runs must be at least 1");
  params.validate();
  std::vector<RunRecord> records(n_runs);
  std::exception_ptr failure;
  const auto count = static_cast<long>(n_runs);
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < count; ++i) {
    try {
      records[static_cast<std::size_t>(i)] = run_experiment(params, base_seed + static_cast<std::uint64_t>(i));
    } catch (...) {
#pragma omp critical(optocorr_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

}  // namespace optocorr
