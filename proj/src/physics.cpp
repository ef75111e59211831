#include "optocorr/physics.hpp"

#include <cmath>
#include <string>

#include "optocorr/constants.hpp"
#include "optocorr/errors.hpp"

namespace optocorr {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidSpecError(std::string(name) + " must be positive and finite");
  }
}

void require_non_negative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw InvalidSpecError(std::string(name) + " must be non-negative and finite");
  }
}

void require_frequency(double freq) {
  if (!(freq >= 0.0)) throw InvalidSpecError("frequency must be non-negative");
}

}  // namespace

double MechanicalOscillator::angular_resonance() const { return constants::two_pi * resonance_freq; }

void MechanicalOscillator::validate() const {
  require_positive(resonance_freq, "resonance_freq");
  require_positive(mass, "mass");
  require_positive(quality_factor, "quality_factor");
}

void OpticalCavity::validate() const {
  require_positive(finesse, "finesse");
  require_positive(wavelength, "wavelength");
  require_positive(bandwidth_freq, "bandwidth_freq");
}

void BeamConfig::validate() const {
  require_non_negative(signal_power, "signal_power");
  require_non_negative(meter_power, "meter_power");
  require_non_negative(shot_noise_floor, "shot_noise_floor");
  require_non_negative(shot_reference_power, "shot_reference_power");
  if (shot_reference_power > 0.0 && shot_noise_floor > 0.0 && !(meter_power > 0.0)) {
    throw InvalidSpecError("a scaled shot-noise floor needs a positive meter_power");
  }
}

double BeamConfig::effective_shot_floor() const {
  if (shot_reference_power <= 0.0 || shot_noise_floor == 0.0) return shot_noise_floor;
  return shot_noise_floor * std::sqrt(shot_reference_power / meter_power);
}

double ExperimentParams::envelope_rate() const {
  return sample_rate > 0.0 ? sample_rate : 10.0 * analysis_bandwidth;
}

std::size_t ExperimentParams::sample_count() const {
  return static_cast<std::size_t>(std::llround(envelope_rate() * run_duration));
}

void ExperimentParams::validate() const {
  oscillator.validate();
  cavity.validate();
  beams.validate();
  require_non_negative(temperature, "temperature");
  require_positive(center_freq, "center_freq");
  require_positive(analysis_bandwidth, "analysis_bandwidth");
  require_positive(run_duration, "run_duration");
  require_non_negative(drive_ratio, "drive_ratio");
  require_positive(drive_bandwidth, "drive_bandwidth");
  require_non_negative(sample_rate, "sample_rate");
  const double rate = envelope_rate();
  if (rate < 2.0 * analysis_bandwidth) {
    throw InvalidSpecError("sample_rate must be at least twice analysis_bandwidth");
  }
  if (drive_bandwidth > rate) throw InvalidSpecError("drive_bandwidth exceeds sample_rate");
  if (center_freq <= rate / 2.0) {
    throw InvalidSpecError("center_freq must exceed the envelope Nyquist frequency");
  }
  if (sample_count() < 2) throw InvalidSpecError("run_duration too short for the sample rate");
}

complex susceptibility_angular(const MechanicalOscillator& osc, double omega) {
  const double wm = osc.angular_resonance();
  const complex denom(wm * wm - omega * omega, -omega * wm / osc.quality_factor);
  return 1.0 / (osc.mass * denom);
}

complex susceptibility(const MechanicalOscillator& osc, double freq) {
  require_frequency(freq);
  return susceptibility_angular(osc, constants::two_pi * freq);
}

complex intensity_reflection(const OpticalCavity& cavity, double freq) {
  require_frequency(freq);
  const double w = cavity.reduced_frequency(freq);
  return complex(1.0, w) / complex(1.0, -w);
}

complex phase_transfer(const OpticalCavity& cavity, double freq) {
  require_frequency(freq);
  const double w = cavity.reduced_frequency(freq);
  return 8.0 * cavity.finesse / (cavity.wavelength * complex(1.0, -w));
}

complex radiation_displacement_transfer(const ExperimentParams& params, double freq) {
  return phase_transfer(params.cavity, freq) * constants::hbar * susceptibility(params.oscillator, freq);
}

double rad_thermal_ratio(const ExperimentParams& params) {
  const auto& cav = params.cavity;
  const auto& osc = params.oscillator;
  const double finesse = cav.finesse / 300000.0;
  return 2.3 * finesse * finesse * (800e-9 / cav.wavelength) * (params.beams.signal_power / 1e-3) *
         (1e-6 / osc.mass) * (osc.quality_factor / 1e6) * (1e6 / osc.resonance_freq) * (1.0 / params.temperature);
}

double photon_flux(double power, double wavelength) {
  return power * wavelength / (constants::two_pi * constants::hbar * constants::speed_of_light);
}

}  // namespace optocorr
