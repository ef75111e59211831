#include "optocorr/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "optocorr/errors.hpp"

namespace optocorr {

ChannelMoments& ChannelMoments::operator+=(const ChannelMoments& other) {
  signal_power_sum += other.signal_power_sum;
  meter_power_sum += other.meter_power_sum;
  cross_sum += other.cross_sum;
  n_samples += other.n_samples;
  return *this;
}

ChannelMoments channel_moments(const ComplexEnvelope& signal, const ComplexEnvelope& meter) {
  if (signal.size() != meter.size()) throw DegenerateDataError("channel lengths differ");
  long double ss = 0.0L, mm = 0.0L, cr = 0.0L, ci = 0.0L;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const long double sr = signal.samples[i].real(), si = signal.samples[i].imag();
    const long double mr = meter.samples[i].real(), mi = meter.samples[i].imag();
    ss += sr * sr + si * si;
    mm += mr * mr + mi * mi;
    // s * conj(m)
    cr += sr * mr + si * mi;
    ci += si * mr - sr * mi;
  }
  ChannelMoments m;
  m.signal_power_sum = static_cast<double>(ss);
  m.meter_power_sum = static_cast<double>(mm);
  m.cross_sum = {static_cast<double>(cr), static_cast<double>(ci)};
  m.n_samples = signal.size();
  return m;
}

double coefficient_from_moments(const ChannelMoments& m) {
  if (m.n_samples == 0 || !(m.signal_power_sum > 0.0) || !(m.meter_power_sum > 0.0)) {
    throw DegenerateDataError("correlation undefined: a channel has zero variance");
  }
  const double n = static_cast<double>(m.n_samples);
  const double ps = m.signal_power_sum / n;
  const double pm = m.meter_power_sum / n;
  const std::complex<double> cross = m.cross_sum / n;
  return std::min(1.0, std::norm(cross) / (ps * pm));
}

namespace {

void require_pair(const ComplexEnvelope& signal, const ComplexEnvelope& meter) {
  if (signal.size() != meter.size()) throw DegenerateDataError("channel lengths differ");
  if (signal.size() < 2) throw DegenerateDataError("at least two samples are required");
}

}  // namespace

ComplexEnvelope conditional_fluctuations(const ComplexEnvelope& signal, const ComplexEnvelope& meter) {
  require_pair(signal, meter);
  const auto m = channel_moments(signal, meter);
  if (!(m.meter_power_sum > 0.0)) throw DegenerateDataError("conditional fluctuations: meter variance is zero");
  const std::complex<double> gain = m.cross_sum / m.meter_power_sum;
  ComplexEnvelope out = signal;
  for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] -= gain * meter.samples[i];
  return out;
}

CorrelationReport correlation_coefficient(const ComplexEnvelope& signal, const ComplexEnvelope& meter) {
  require_pair(signal, meter);
  const auto m = channel_moments(signal, meter);
  CorrelationReport report;
  report.coefficient = coefficient_from_moments(m);
  const double n = static_cast<double>(m.n_samples);
  report.signal_variance = m.signal_power_sum / n;
  report.meter_variance = m.meter_power_sum / n;
  report.cross_moment = m.cross_sum / n;
  report.n_samples = m.n_samples;
  report.conditional_variance = mean_power(conditional_fluctuations(signal, meter));
  report.conditional_dispersion_ratio = std::sqrt(report.conditional_variance / report.signal_variance);
  return report;
}

HistogramGrid HistogramGrid::spanning(const ComplexEnvelope& env, std::size_t bins, double n_sigma) {
  if (bins == 0) throw InvalidSpecError("histogram needs at least one bin");
  const double sigma = std::sqrt(mean_power(env) / 2.0);
  const double half = sigma > 0.0 ? n_sigma * sigma : 1.0;
  return HistogramGrid{bins, bins, half, half};
}

double PhaseSpaceHistogram::bin_center_x(std::size_t ix) const {
  return -grid.half_width_x + (static_cast<double>(ix) + 0.5) * grid.bin_width_x();
}

double PhaseSpaceHistogram::bin_center_y(std::size_t iy) const {
  return -grid.half_width_y + (static_cast<double>(iy) + 0.5) * grid.bin_width_y();
}

double PhaseSpaceHistogram::peak() const {
  return probability.empty() ? 0.0 : *std::max_element(probability.begin(), probability.end());
}

PhaseSpaceHistogram histogram(const ComplexEnvelope& env, const HistogramGrid& grid, std::string label) {
  if (env.empty()) throw DegenerateDataError("histogram of an empty envelope");
  if (grid.bins_x == 0 || grid.bins_y == 0 || !(grid.half_width_x > 0.0) || !(grid.half_width_y > 0.0)) {
    throw InvalidSpecError("histogram grid must have bins and a positive extent");
  }
  PhaseSpaceHistogram h;
  h.grid = grid;
  h.label = std::move(label);
  std::vector<std::size_t> counts(grid.bins_x * grid.bins_y, 0);
  const double wx = grid.bin_width_x(), wy = grid.bin_width_y();
  for (const auto& z : env.samples) {
    const double fx = std::floor((z.real() + grid.half_width_x) / wx);
    const double fy = std::floor((z.imag() + grid.half_width_y) / wy);
    if (fx < 0.0 || fy < 0.0 || fx >= static_cast<double>(grid.bins_x) || fy >= static_cast<double>(grid.bins_y)) {
      ++h.n_outside;
      continue;
    }
    ++counts[static_cast<std::size_t>(fy) * grid.bins_x + static_cast<std::size_t>(fx)];
    ++h.n_inside;
  }
  if (h.n_inside == 0) throw DegenerateDataError("no samples fall inside the histogram grid");
  h.probability.resize(counts.size());
  const double total = static_cast<double>(h.n_inside);
  std::transform(counts.begin(), counts.end(), h.probability.begin(),
                 [total](std::size_t c) { return static_cast<double>(c) / total; });
  return h;
}

HistogramComparison compare_histograms(const PhaseSpaceHistogram& raw, const PhaseSpaceHistogram& conditional,
                                       const ComplexEnvelope& raw_env, const ComplexEnvelope& conditional_env) {
  HistogramComparison cmp;
  const double raw_power = mean_power(raw_env);
  if (!(raw_power > 0.0)) throw DegenerateDataError("raw channel has zero variance");
  cmp.dispersion_ratio = std::sqrt(mean_power(conditional_env) / raw_power);
  cmp.peak_ratio = conditional.peak() / raw.peak();
  return cmp;
}

std::string_view to_string(SweepMode mode) { return mode == SweepMode::moments ? "moments" : "per-run"; }

SweepMode sweep_mode_from_string(std::string_view name) {
  if (name == "moments") return SweepMode::moments;
  if (name == "per-run") return SweepMode::per_run;
  throw InvalidSpecError("unknown sweep mode '" + std::string(name) + "' (expected moments or per-run)");
}

std::vector<ChannelMoments> record_moments_serial(std::span<const RunRecord> records) {
  std::vector<ChannelMoments> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(channel_moments(r.signal_out, r.meter_displacement));
  return out;
}

std::vector<ChannelMoments> record_moments(std::span<const RunRecord> records) {
  for (const auto& r : records) {
    if (r.signal_out.size() != r.meter_displacement.size()) throw DegenerateDataError("channel lengths differ");
  }
  std::vector<ChannelMoments> out(records.size());
  const auto count = static_cast<long>(records.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = channel_moments(r.signal_out, r.meter_displacement);
  }
  return out;
}

std::vector<ChannelMoments> sweep_moments_serial(const ExperimentParams& params, std::size_t n_runs,
                                                 std::uint64_t base_seed) {
  if (n_runs == 0) throw InvalidSpecError("sweep needs at least one run");
  std::vector<ChannelMoments> out;
  out.reserve(n_runs);
  for (std::size_t i = 0; i < n_runs; ++i) {
    const auto rec = run_experiment(params, base_seed + i);
    out.push_back(channel_moments(rec.signal_out, rec.meter_displacement));
  }
  return out;
}

std::vector<ChannelMoments> sweep_moments(const ExperimentParams& params, std::size_t n_runs,
                                          std::uint64_t base_seed) {
  if (n_runs == 0) throw InvalidSpecError("sweep needs at least one run");
  params.validate();
  std::vector<ChannelMoments> out(n_runs);
  std::exception_ptr failure;
  const auto count = static_cast<long>(n_runs);
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < count; ++i) {
    try {
      const auto rec = run_experiment(params, base_seed + static_cast<std::uint64_t>(i));
      out[static_cast<std::size_t>(i)] = channel_moments(rec.signal_out, rec.meter_displacement);
    } catch (...) {
#pragma omp critical(optocorr_sweep_moments_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

SweepTrace sweep_correlation(std::span<const ChannelMoments> moments, double expected_asymptote, SweepMode mode) {
  if (moments.empty()) throw InvalidSpecError("sweep_correlation needs at least one run");
  SweepTrace trace;
  trace.mode = mode;
  trace.expected_asymptote = expected_asymptote;
  trace.per_run_coefficient.reserve(moments.size());
  for (const auto& m : moments) trace.per_run_coefficient.push_back(coefficient_from_moments(m));

  const std::size_t calib = std::min<std::size_t>(20, moments.size());
  if (calib > 1) {
    double mean = 0.0;
    for (std::size_t i = 0; i < calib; ++i) mean += trace.per_run_coefficient[i];
    mean /= static_cast<double>(calib);
    double ss = 0.0;
    for (std::size_t i = 0; i < calib; ++i) ss += (trace.per_run_coefficient[i] - mean) * (trace.per_run_coefficient[i] - mean);
    trace.single_run_sd = std::sqrt(ss / static_cast<double>(calib - 1));
  }

  ChannelMoments pooled;
  double running_sum = 0.0;
  trace.estimate.reserve(moments.size());
  trace.half_width.reserve(moments.size());
  for (std::size_t i = 0; i < moments.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    if (mode == SweepMode::moments) {
      pooled += moments[i];
      trace.estimate.push_back(coefficient_from_moments(pooled));
    } else {
      running_sum += trace.per_run_coefficient[i];
      trace.estimate.push_back(running_sum / n);
    }
    trace.half_width.push_back(trace.single_run_sd / std::sqrt(n));
  }
  return trace;
}

SweepTrace sweep_correlation(std::span<const RunRecord> records, SweepMode mode) {
  if (records.empty()) throw InvalidSpecError("sweep_correlation needs at least one run");
  const double ratio = records.front().params_snapshot.drive_ratio;
  const auto moments = record_moments(records);
  return sweep_correlation(moments, ratio / (1.0 + ratio), mode);
}

}  // namespace optocorr
