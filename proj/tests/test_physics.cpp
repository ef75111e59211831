#include <doctest.h>

#include <cmath>
#include <random>

#include "optocorr/constants.hpp"
#include "optocorr/errors.hpp"
#include "optocorr/physics.hpp"

using namespace optocorr;

namespace {

// Golden values from tests/oracles/golden_values.py (40-digit mpmath).
constexpr double kChiReal = 1.1267921668228493e-8;
constexpr double kChiImag = 6.3325669651237424e-12;
constexpr double kReflectionPhase = 2.026797097683434;
constexpr double kPhaseTransferDc = 3259259259259.2593;
constexpr double kRadReal = 1.0827422598064409e-30;
constexpr double kRadImag = 1.739204520791498e-30;
constexpr double kRatioDefaultSetup1K = 0.00036648559670781893;

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

ExperimentParams reference_point() {
  ExperimentParams p;
  p.cavity.finesse = 300000;
  p.cavity.wavelength = 800e-9;
  p.beams.signal_power = 1e-3;
  p.oscillator.mass = 1e-6;
  p.oscillator.quality_factor = 1e6;
  p.oscillator.resonance_freq = 1e6;
  p.temperature = 1.0;
  return p;
}

}  // namespace

TEST_CASE("susceptibility limits") {
  const MechanicalOscillator osc;
  const double wm = osc.angular_resonance();

  const complex dc = susceptibility(osc, 0.0);
  CHECK(dc.imag() == 0.0);
  CHECK(close_rel(dc.real(), 1.0 / (osc.mass * wm * wm), 1e-14));

  const complex res = susceptibility(osc, osc.resonance_freq);
  CHECK(std::abs(res.real()) < 1e-12 * std::abs(res));
  CHECK(res.imag() > 0.0);
  CHECK(close_rel(std::abs(res), osc.quality_factor / (osc.mass * wm * wm), 1e-12));

  CHECK(close_rel(osc.linewidth(), 2.25, 1e-12));
}

TEST_CASE("susceptibility golden value at the drive frequency") {
  const complex chi = susceptibility(MechanicalOscillator{}, 1.123e6);
  CHECK(close_rel(chi.real(), kChiReal, 1e-11));
  CHECK(close_rel(chi.imag(), kChiImag, 1e-8));
}

TEST_CASE("susceptibility is causal and passive") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> logf(1.0, 8.0);
  std::uniform_real_distribution<double> logq(0.0, 7.0);
  for (int i = 0; i < 500; ++i) {
    MechanicalOscillator osc{std::pow(10.0, logf(gen)), 1e-6 * std::pow(10.0, logq(gen) / 2), std::pow(10.0, logq(gen))};
    const double w = constants::two_pi * std::pow(10.0, logf(gen));
    const complex pos = susceptibility_angular(osc, w);
    const complex neg = susceptibility_angular(osc, -w);
    CHECK(pos.imag() > 0.0);
    CHECK(std::abs(std::conj(pos) - neg) <= 1e-14 * std::abs(pos));
  }
}

TEST_CASE("intensity reflection is an all-pass") {
  const OpticalCavity cav;
  CHECK(intensity_reflection(cav, 0.0) == complex(1.0, 0.0));
  for (double f = 0.0; f < 1e8; f = f * 1.7 + 13.0) {
    CHECK(std::abs(std::abs(intensity_reflection(cav, f)) - 1.0) < 1e-14);
  }
  const complex r = intensity_reflection(cav, 1.123e6);
  CHECK(close_rel(std::arg(r), kReflectionPhase, 1e-13));
  CHECK(close_rel(cav.reduced_frequency(1.123e6), 1.6042857142857143, 1e-15));
}

TEST_CASE("phase transfer") {
  const OpticalCavity cav;
  const complex dc = phase_transfer(cav, 0.0);
  CHECK(dc.imag() == 0.0);
  CHECK(close_rel(dc.real(), kPhaseTransferDc, 1e-14));
  for (double f : {1.0, 1e3, 7e5, 1.123e6, 3e7}) {
    const double w = cav.reduced_frequency(f);
    CHECK(close_rel(std::abs(phase_transfer(cav, f)), kPhaseTransferDc / std::sqrt(1.0 + w * w), 1e-14));
  }
}

TEST_CASE("radiation displacement transfer composes cavity and mechanics") {
  const ExperimentParams p;
  const complex dc = radiation_displacement_transfer(p, 0.0);
  CHECK(dc.imag() == 0.0);
  CHECK(close_rel(dc.real(), phase_transfer(p.cavity, 0.0).real() * constants::hbar *
                                 susceptibility(p.oscillator, 0.0).real(), 1e-14));

  const complex h = radiation_displacement_transfer(p, 1.123e6);
  CHECK(close_rel(h.real(), kRadReal, 1e-9));
  CHECK(close_rel(h.imag(), kRadImag, 1e-9));

  for (double f : {10.0, 5e5, 1.12e6, 1.125e6, 1.13e6, 4e6}) {
    const complex ratio = radiation_displacement_transfer(p, f) / phase_transfer(p.cavity, f);
    const complex expected = constants::hbar * susceptibility(p.oscillator, f);
    CHECK(std::abs(ratio - expected) <= 1e-14 * std::abs(expected));
    const double phase = std::arg(phase_transfer(p.cavity, f)) + std::arg(susceptibility(p.oscillator, f));
    CHECK(std::abs(std::remainder(std::arg(radiation_displacement_transfer(p, f)) - phase, constants::two_pi)) < 1e-12);
  }
}

TEST_CASE("radiation/thermal ratio at the reference point and its scalings") {
  auto p = reference_point();
  CHECK(rad_thermal_ratio(p) == doctest::Approx(2.3).epsilon(1e-14));

  auto doubled_power = p;
  doubled_power.beams.signal_power *= 2;
  CHECK(rad_thermal_ratio(doubled_power) == doctest::Approx(4.6).epsilon(1e-14));
  auto doubled_t = p;
  doubled_t.temperature *= 2;
  CHECK(rad_thermal_ratio(doubled_t) == doctest::Approx(1.15).epsilon(1e-14));

  ExperimentParams defaults;
  defaults.temperature = 1.0;
  CHECK(close_rel(rad_thermal_ratio(defaults), kRatioDefaultSetup1K, 1e-13));
}

TEST_CASE("radiation/thermal ratio is multiplicative with the closed-form exponents") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int i = 0; i < 200; ++i) {
    ExperimentParams a = reference_point();
    const double k = scale(gen);
    const double base = rad_thermal_ratio(a);
    auto check = [&](auto mutate, double exponent) {
      ExperimentParams b = a;
      mutate(b);
      CHECK(close_rel(rad_thermal_ratio(b), base * std::pow(k, exponent), 1e-12));
    };
    check([k](ExperimentParams& b) { b.cavity.finesse *= k; }, 2.0);
    check([k](ExperimentParams& b) { b.cavity.wavelength *= k; }, -1.0);
    check([k](ExperimentParams& b) { b.beams.signal_power *= k; }, 1.0);
    check([k](ExperimentParams& b) { b.oscillator.mass *= k; }, -1.0);
    check([k](ExperimentParams& b) { b.oscillator.quality_factor *= k; }, 1.0);
    check([k](ExperimentParams& b) { b.oscillator.resonance_freq *= k; }, -1.0);
    check([k](ExperimentParams& b) { b.temperature *= k; }, -1.0);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(susceptibility(MechanicalOscillator{}, -1.0), InvalidSpecError);
  CHECK_THROWS_AS(phase_transfer(OpticalCavity{}, -1.0), InvalidSpecError);
  CHECK_THROWS_AS((MechanicalOscillator{1e6, 0.0, 1e5}.validate()), InvalidSpecError);
  CHECK_THROWS_AS((OpticalCavity{0.0, 8e-7, 7e5}.validate()), InvalidSpecError);

  ExperimentParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.envelope_rate() == 4000.0);
  CHECK(p.sample_count() == 800);

  auto bad = p;
  bad.analysis_bandwidth = -1;
  CHECK_THROWS_AS(bad.validate(), InvalidSpecError);
  bad = p;
  bad.sample_rate = 500.0;  // below 2 x analysis bandwidth
  CHECK_THROWS_AS(bad.validate(), InvalidSpecError);
  bad = p;
  bad.center_freq = 1000.0;
  CHECK_THROWS_AS(bad.validate(), InvalidSpecError);
  bad = p;
  bad.beams.meter_power = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidSpecError);
}

TEST_CASE("shot floor scales with meter power") {
  BeamConfig b;
  CHECK(close_rel(b.effective_shot_floor(), 2.7e-20 * std::sqrt(0.1), 1e-14));
  b.meter_power = b.shot_reference_power;
  CHECK(b.effective_shot_floor() == 2.7e-20);
  b.shot_reference_power = 0.0;
  b.meter_power = 1.0;
  CHECK(b.effective_shot_floor() == 2.7e-20);
}

TEST_CASE("photon flux") {
  // 1 W at 810 nm: P * lambda / (h c)
  CHECK(close_rel(photon_flux(1.0, 810e-9), 810e-9 / (6.62607015e-34 * 299792458.0), 1e-9));
}
