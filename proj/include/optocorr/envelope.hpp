#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace optocorr {

enum class Unit { photons_per_second, meters, radians };

std::string_view to_string(Unit unit);
Unit unit_from_string(std::string_view name);

// Uniformly sampled complex baseband record X(t) + iY(t) around center_freq.
struct ComplexEnvelope {
  std::vector<std::complex<double>> samples;
  double sample_rate = 0.0;  // Hz
  double center_freq = 0.0;  // Hz
  Unit unit = Unit::meters;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
  double time(std::size_t i) const { return static_cast<double>(i) / sample_rate; }
  double bin_spacing() const { return sample_rate / static_cast<double>(samples.size()); }
};

// Baseband offset (Hz) of DFT bin k for an n-point record at the given rate.
// Bins above n/2 map to negative offsets.
double bin_offset(std::size_t k, std::size_t n, double sample_rate);

// Half-open band [-bandwidth/2, +bandwidth/2) expressed in signed bin indices.
struct BinBand {
  long lo = 0;  // inclusive
  long hi = 0;  // exclusive
  std::size_t count() const { return hi > lo ? static_cast<std::size_t>(hi - lo) : 0; }
  bool contains(long signed_bin) const { return signed_bin >= lo && signed_bin < hi; }
};

BinBand band_bins(double bandwidth, std::size_t n, double sample_rate);

// Signed bin index (-n/2 .. n/2) of storage index k.
long signed_bin(std::size_t k, std::size_t n);
// Storage index of a signed bin index.
std::size_t storage_bin(long signed_index, std::size_t n);

// Mean of |z|^2 over the record.
double mean_power(const ComplexEnvelope& env);

}  // namespace optocorr
