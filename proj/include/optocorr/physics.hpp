#pragma once

#include <complex>
#include <cstdint>

namespace optocorr {

using complex = std::complex<double>;

// Single mechanical mode of the moving mirror.
struct MechanicalOscillator {
  double resonance_freq = 1.125e6;  // Hz
  double mass = 500e-6;             // kg
  double quality_factor = 5e5;

  double angular_resonance() const;
  // Full width of the mechanical resonance, Hz.
  double linewidth() const { return resonance_freq / quality_factor; }
  void validate() const;
};

struct OpticalCavity {
  double finesse = 330000.0;
  double wavelength = 810e-9;     // m
  double bandwidth_freq = 700e3;  // Hz, cavity pole

  double reduced_frequency(double freq) const { return freq / bandwidth_freq; }
  void validate() const;
};

struct BeamConfig {
  double signal_power = 150e-6;     // W
  double meter_power = 500e-6;      // W
  double shot_noise_floor = 2.7e-20;  // m/sqrt(Hz), displacement-equivalent
  // Meter power at which shot_noise_floor was measured. The floor scales as
  // 1/sqrt(meter_power); 0 applies shot_noise_floor unscaled.
  double shot_reference_power = 50e-6;  // W

  // Displacement-equivalent shot-noise ASD at meter_power, m/sqrt(Hz).
  double effective_shot_floor() const;
  void validate() const;
};

struct ExperimentParams {
  MechanicalOscillator oscillator;
  OpticalCavity cavity;
  BeamConfig beams;
  double temperature = 300.0;         // K
  double center_freq = 1.123e6;       // Hz
  double analysis_bandwidth = 400.0;  // Hz
  double run_duration = 0.2;          // s
  double drive_ratio = 25.0;          // S_x^rad / S_x^T at center_freq
  double drive_bandwidth = 800.0;     // Hz, full two-sided width of the drive envelope
  double sample_rate = 0.0;           // Hz, 0 selects 10 x analysis_bandwidth
  std::uint64_t seed = 1;

  double envelope_rate() const;
  std::size_t sample_count() const;
  void validate() const;
};

// Viscous-damping Lorentzian, m/N.
complex susceptibility(const MechanicalOscillator& osc, double freq);
// Same response at any real angular frequency, including negative ones.
complex susceptibility_angular(const MechanicalOscillator& osc, double omega);

// All-pass reflection of intensity fluctuations, (1 + i w) / (1 - i w).
complex intensity_reflection(const OpticalCavity& cavity, double freq);

// Meter phase per unit mirror displacement, rad/m.
complex phase_transfer(const OpticalCavity& cavity, double freq);

// Mirror displacement per unit incident intensity fluctuation (photons/s), m s.
complex radiation_displacement_transfer(const ExperimentParams& params, double freq);

// Closed-form radiation/thermal spectral ratio scaled from the reference
// point (F = 3e5, 800 nm, 1 mW, 1 mg, Q = 1e6, 1 MHz, 1 K) where it is 2.3.
double rad_thermal_ratio(const ExperimentParams& params);

// Mean photon flux of a beam of the given power, photons/s.
double photon_flux(double power, double wavelength);

}  // namespace optocorr
