#pragma once

#include <cstdint>
#include <functional>

#include "optocorr/envelope.hpp"
#include "optocorr/physics.hpp"

namespace optocorr {

struct NoiseSpec {
  double bandwidth = 0.0;   // Hz, full two-sided width around baseband
  double target_psd = 0.0;  // unit^2/Hz inside the band
  std::uint64_t seed = 0;
  double duration = 0.0;     // s
  double sample_rate = 0.0;  // Hz
  double center_freq = 0.0;  // Hz, metadata carried into the envelope
  Unit unit = Unit::meters;

  std::size_t sample_count() const;
  void validate() const;
};

// PSD profile over baseband offset (Hz) inside the band.
using PsdProfile = std::function<double(double offset)>;

// Frequency-domain coloring: independent circular complex Gaussians per DFT
// bin inside [-bandwidth/2, bandwidth/2), scaled so that E|z|^2 equals the
// PSD integrated over the band, then inverse transformed.
ComplexEnvelope gen_band_limited_gaussian(const NoiseSpec& spec);
ComplexEnvelope gen_colored_gaussian(const NoiseSpec& spec, const PsdProfile& profile);

// One-sided fluctuation-dissipation displacement PSD, m^2/Hz.
double thermal_psd(const ExperimentParams& params, double freq);

// Drive PSD ((photons/s)^2/Hz) that puts the radiation-pressure displacement
// at drive_ratio times the thermal PSD at the center frequency.
double drive_psd(const ExperimentParams& params);

// True when the thermal envelope is colored by the exact susceptibility
// profile rather than drawn flat at the center frequency.
bool thermal_uses_exact_profile(const ExperimentParams& params);

NoiseSpec drive_spec(const ExperimentParams& params);
NoiseSpec thermal_spec(const ExperimentParams& params);
NoiseSpec shot_spec(const ExperimentParams& params);

ComplexEnvelope gen_drive_envelope(const ExperimentParams& params);
ComplexEnvelope gen_thermal_envelope(const ExperimentParams& params);
ComplexEnvelope gen_shot_floor(const ExperimentParams& params);

struct NoiseBudget {
  double rad_thermal_ratio = 0.0;       // closed-form reference scaling
  double thermal_psd = 0.0;             // m^2/Hz at center_freq
  double drive_psd = 0.0;               // (photons/s)^2/Hz
  double radiation_psd = 0.0;           // m^2/Hz at center_freq
  double shot_psd = 0.0;                // m^2/Hz
  double radiation_to_thermal_db = 0.0;
  double shot_to_thermal_db = 0.0;
  double thermal_band_rms = 0.0;        // m
  double shot_band_rms = 0.0;           // m
  double equipartition_variance = 0.0;  // k_B T / (M Omega_M^2), m^2
  double signal_photon_flux = 0.0;      // photons/s
  double detuning_linewidths = 0.0;     // |center - resonance| / linewidth
  double expected_coefficient = 0.0;    // (1 + S_T/S_rad)^-1
  double expected_dispersion_ratio = 0.0;
};

NoiseBudget noise_budget(const ExperimentParams& params);

}  // namespace optocorr
