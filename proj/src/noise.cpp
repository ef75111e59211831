#include "optocorr/noise.hpp"

#include <cmath>
#include <random>

#include "optocorr/constants.hpp"
#include "optocorr/errors.hpp"
#include "optocorr/fft.hpp"
#include "optocorr/rng.hpp"

namespace optocorr {

std::size_t NoiseSpec::sample_count() const {
  return static_cast<std::size_t>(std::llround(sample_rate * duration));
}

void NoiseSpec::validate() const {
  if (!(sample_rate > 0.0)) throw InvalidSpecError("noise spec: sample_rate must be positive");
  if (!(duration > 0.0)) throw InvalidSpecError("noise spec: duration must be positive");
  if (!(bandwidth > 0.0)) throw InvalidSpecError("noise spec: bandwidth must be positive");
  if (bandwidth > sample_rate) throw InvalidSpecError("noise spec: bandwidth exceeds sample_rate");
  if (!(target_psd >= 0.0) || !std::isfinite(target_psd)) {
    throw InvalidSpecError("noise spec: target_psd must be non-negative");
  }
  if (sample_count() == 0) throw InvalidSpecError("noise spec: no samples");
}

ComplexEnvelope gen_colored_gaussian(const NoiseSpec& spec, const PsdProfile& profile) {
  spec.validate();
  const std::size_t n = spec.sample_count();
  const double df = spec.sample_rate / static_cast<double>(n);
  const BinBand band = band_bins(spec.bandwidth, n, spec.sample_rate);

  std::vector<std::complex<double>> bins(n);
  auto engine = make_engine(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (long b = band.lo; b < band.hi; ++b) {
    const double re = gauss(engine);
    const double im = gauss(engine);
    const double psd = profile(static_cast<double>(b) * df);
    if (!(psd >= 0.0)) throw InvalidSpecError("noise profile returned a negative PSD");
    // E|c|^2 = psd * df per bin; the factor n undoes the inverse normalization.
    const double scale = std::sqrt(psd * df / 2.0) * static_cast<double>(n);
    bins[storage_bin(b, n)] = {scale * re, scale * im};
  }

  ComplexEnvelope env;
  env.samples = fft::inverse(bins);
  env.sample_rate = spec.sample_rate;
  env.center_freq = spec.center_freq;
  env.unit = spec.unit;
  return env;
}

ComplexEnvelope gen_band_limited_gaussian(const NoiseSpec& spec) {
  const double psd = spec.target_psd;
  return gen_colored_gaussian(spec, [psd](double) { return psd; });
}

double thermal_psd(const ExperimentParams& params, double freq) {
  if (!(freq > 0.0)) throw InvalidSpecError("thermal_psd: frequency must be positive");
  const double w = constants::two_pi * freq;
  return 4.0 * constants::boltzmann * params.temperature / w * susceptibility(params.oscillator, freq).imag();
}

double drive_psd(const ExperimentParams& params) {
  const double gain = std::norm(radiation_displacement_transfer(params, params.center_freq));
  return params.drive_ratio * thermal_psd(params, params.center_freq) / gain;
}

bool thermal_uses_exact_profile(const ExperimentParams& params) {
  return std::abs(params.center_freq - params.oscillator.resonance_freq) < 10.0 * params.analysis_bandwidth;
}

namespace {

NoiseSpec base_spec(const ExperimentParams& params, Stream stream, Unit unit) {
  NoiseSpec spec;
  spec.seed = derive_seed(params.seed, stream);
  spec.duration = params.run_duration;
  spec.sample_rate = params.envelope_rate();
  spec.center_freq = params.center_freq;
  spec.unit = unit;
  return spec;
}

}  // namespace

NoiseSpec drive_spec(const ExperimentParams& params) {
  auto spec = base_spec(params, Stream::drive, Unit::photons_per_second);
  spec.bandwidth = params.drive_bandwidth;
  spec.target_psd = params.drive_ratio > 0.0 ? drive_psd(params) : 0.0;
  return spec;
}

NoiseSpec thermal_spec(const ExperimentParams& params) {
  auto spec = base_spec(params, Stream::thermal, Unit::meters);
  spec.bandwidth = params.analysis_bandwidth;
  spec.target_psd = thermal_psd(params, params.center_freq);
  return spec;
}

NoiseSpec shot_spec(const ExperimentParams& params) {
  auto spec = base_spec(params, Stream::shot, Unit::meters);
  spec.bandwidth = params.analysis_bandwidth;
  const double floor = params.beams.effective_shot_floor();
  spec.target_psd = floor * floor;
  return spec;
}

ComplexEnvelope gen_drive_envelope(const ExperimentParams& params) {
  params.validate();
  return gen_band_limited_gaussian(drive_spec(params));
}

ComplexEnvelope gen_thermal_envelope(const ExperimentParams& params) {
  params.validate();
  const auto spec = thermal_spec(params);
  if (!thermal_uses_exact_profile(params)) return gen_band_limited_gaussian(spec);
  const double center = params.center_freq;
  return gen_colored_gaussian(spec, [&params, center](double offset) { return thermal_psd(params, center + offset); });
}

ComplexEnvelope gen_shot_floor(const ExperimentParams& params) {
  params.validate();
  return gen_band_limited_gaussian(shot_spec(params));
}

namespace {

double to_db(double ratio) { return ratio > 0.0 ? 10.0 * std::log10(ratio) : -INFINITY; }

}  // namespace

NoiseBudget noise_budget(const ExperimentParams& params) {
  params.validate();
  NoiseBudget budget;
  const double fc = params.center_freq;
  budget.rad_thermal_ratio = rad_thermal_ratio(params);
  budget.thermal_psd = thermal_psd(params, fc);
  budget.drive_psd = params.drive_ratio > 0.0 ? drive_psd(params) : 0.0;
  budget.radiation_psd = budget.drive_psd * std::norm(radiation_displacement_transfer(params, fc));
  budget.shot_psd = params.beams.effective_shot_floor() * params.beams.effective_shot_floor();
  budget.radiation_to_thermal_db = to_db(budget.radiation_psd / budget.thermal_psd);
  budget.shot_to_thermal_db = to_db(budget.shot_psd / budget.thermal_psd);
  budget.thermal_band_rms = std::sqrt(budget.thermal_psd * params.analysis_bandwidth);
  budget.shot_band_rms = std::sqrt(budget.shot_psd * params.analysis_bandwidth);
  const double wm = params.oscillator.angular_resonance();
  budget.equipartition_variance = constants::boltzmann * params.temperature / (params.oscillator.mass * wm * wm);
  budget.signal_photon_flux = photon_flux(params.beams.signal_power, params.cavity.wavelength);
  budget.detuning_linewidths = std::abs(fc - params.oscillator.resonance_freq) / params.oscillator.linewidth();
  budget.expected_coefficient = params.drive_ratio / (1.0 + params.drive_ratio);
  budget.expected_dispersion_ratio = std::sqrt(1.0 - budget.expected_coefficient);
  return budget;
}

}  // namespace optocorr
