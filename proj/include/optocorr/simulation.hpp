#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "optocorr/envelope.hpp"
#include "optocorr/physics.hpp"

namespace optocorr {

// One synchronized dual-channel acquisition.
struct RunRecord {
  ComplexEnvelope signal_out;          // reflected signal intensity, photons/s
  ComplexEnvelope meter_out;           // reflected meter phase, rad
  ComplexEnvelope meter_displacement;  // meter_out / phase_transfer(center), m
  std::uint64_t seed = 0;
  ExperimentParams params_snapshot;
  complex signal_rotation{1.0, 0.0};  // applied to signal_out
  complex meter_rotation{1.0, 0.0};   // applied to meter_out and meter_displacement
};

// Internal stages of a run, all band-limited by the acquisition filter.
struct RunComponents {
  ComplexEnvelope drive_in;           // incident intensity fluctuation
  ComplexEnvelope radiation_motion;   // displacement driven by radiation pressure
  ComplexEnvelope thermal_motion;
  ComplexEnvelope shot_equivalent;    // displacement-equivalent meter floor
  RunRecord record;
};

// Brick-wall low-pass at +-bandwidth/2 applied in the frequency domain.
ComplexEnvelope acquisition_filter(const ComplexEnvelope& env, double bandwidth);

// Deterministic composition of the input-output relations from given noise
// envelopes. Transfers are evaluated per DFT bin at center_freq + offset.
RunComponents propagate(const ExperimentParams& params, const ComplexEnvelope& drive,
                        const ComplexEnvelope& thermal, const ComplexEnvelope& shot);

RunComponents simulate_components(const ExperimentParams& params, std::uint64_t seed);

RunRecord run_experiment(const ExperimentParams& params, std::uint64_t seed);

// Rotates the meter channels by the conjugate phase of
// phase_transfer(center) * susceptibility(center) and the signal channel by
// the conjugate phase of intensity_reflection(center).
RunRecord calibrate_meter(const RunRecord& record);

// Runs seeds base_seed .. base_seed + n_runs - 1 in parallel; the result is in
// seed order and identical to run_sweep_serial.
std::vector<RunRecord> run_sweep(const ExperimentParams& params, std::size_t n_runs,
                                 std::uint64_t base_seed);
std::vector<RunRecord> run_sweep_serial(const ExperimentParams& params, std::size_t n_runs,
                                        std::uint64_t base_seed);

}  // namespace optocorr
