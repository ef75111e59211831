#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "optocorr/envelope.hpp"
#include "optocorr/simulation.hpp"

namespace optocorr {

// Temporal second moments of a channel pair, as sums over samples.
struct ChannelMoments {
  double signal_power_sum = 0.0;
  double meter_power_sum = 0.0;
  std::complex<double> cross_sum{0.0, 0.0};  // sum of s * conj(m)
  std::size_t n_samples = 0;

  ChannelMoments& operator+=(const ChannelMoments& other);
};

ChannelMoments channel_moments(const ComplexEnvelope& signal, const ComplexEnvelope& meter);

struct CorrelationReport {
  double coefficient = 0.0;
  double signal_variance = 0.0;
  double meter_variance = 0.0;
  std::complex<double> cross_moment{0.0, 0.0};
  std::size_t n_samples = 0;
  double conditional_variance = 0.0;
  double conditional_dispersion_ratio = 0.0;
};

// |<s m*>|^2 / (<|s|^2> <|m|^2>) over temporal averages.
double coefficient_from_moments(const ChannelMoments& moments);

CorrelationReport correlation_coefficient(const ComplexEnvelope& signal, const ComplexEnvelope& meter);

// Residual of the signal after the least-squares prediction from the meter.
ComplexEnvelope conditional_fluctuations(const ComplexEnvelope& signal, const ComplexEnvelope& meter);

struct HistogramGrid {
  std::size_t bins_x = 64;
  std::size_t bins_y = 64;
  double half_width_x = 1.0;
  double half_width_y = 1.0;

  double bin_width_x() const { return 2.0 * half_width_x / static_cast<double>(bins_x); }
  double bin_width_y() const { return 2.0 * half_width_y / static_cast<double>(bins_y); }

  // Square grid spanning +-n_sigma per-quadrature standard deviations of env.
  static HistogramGrid spanning(const ComplexEnvelope& env, std::size_t bins = 64, double n_sigma = 4.0);
};

struct PhaseSpaceHistogram {
  HistogramGrid grid;
  std::vector<double> probability;  // row-major, index = iy * bins_x + ix
  std::size_t n_inside = 0;
  std::size_t n_outside = 0;
  std::string label;

  double at(std::size_t ix, std::size_t iy) const { return probability[iy * grid.bins_x + ix]; }
  double bin_center_x(std::size_t ix) const;
  double bin_center_y(std::size_t iy) const;
  double peak() const;
};

PhaseSpaceHistogram histogram(const ComplexEnvelope& env, const HistogramGrid& grid,
                              std::string label = {});

// Raw versus conditional distribution summary on a shared grid.
struct HistogramComparison {
  double dispersion_ratio = 0.0;  // per-axis RMS of conditional / raw
  double peak_ratio = 0.0;        // conditional peak bin / raw peak bin
};

HistogramComparison compare_histograms(const PhaseSpaceHistogram& raw, const PhaseSpaceHistogram& conditional,
                                       const ComplexEnvelope& raw_env, const ComplexEnvelope& conditional_env);

enum class SweepMode { moments, per_run };

std::string_view to_string(SweepMode mode);
SweepMode sweep_mode_from_string(std::string_view name);

struct SweepTrace {
  SweepMode mode = SweepMode::moments;
  std::vector<double> estimate;    // estimate[N-1] uses the first N runs
  std::vector<double> half_width;  // u1 / sqrt(N)
  std::vector<double> per_run_coefficient;
  double single_run_sd = 0.0;      // u1
  double expected_asymptote = 0.0;

  std::size_t size() const { return estimate.size(); }
};

// Per-run moments of (signal_out, meter_displacement). The parallel kernel
// is checked against the serial reference.
std::vector<ChannelMoments> record_moments(std::span<const RunRecord> records);
std::vector<ChannelMoments> record_moments_serial(std::span<const RunRecord> records);

// Simulates seeds base_seed .. base_seed + n_runs - 1 and keeps only the
// per-run moments; the parallel kernel matches the serial reference exactly.
std::vector<ChannelMoments> sweep_moments(const ExperimentParams& params, std::size_t n_runs,
                                          std::uint64_t base_seed);
std::vector<ChannelMoments> sweep_moments_serial(const ExperimentParams& params, std::size_t n_runs,
                                                 std::uint64_t base_seed);

SweepTrace sweep_correlation(std::span<const RunRecord> records, SweepMode mode = SweepMode::moments);
SweepTrace sweep_correlation(std::span<const ChannelMoments> moments, double expected_asymptote,
                             SweepMode mode = SweepMode::moments);

}  // namespace optocorr
