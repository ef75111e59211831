#include "optocorr/envelope.hpp"

#include <cmath>
#include <string>

#include "optocorr/errors.hpp"

namespace optocorr {

std::string_view to_string(Unit unit) {
  switch (unit) {
    case Unit::photons_per_second: return "photons_per_second";
    case Unit::meters: return "meters";
    case Unit::radians: return "radians";
  }
  return "unknown";
}

Unit unit_from_string(std::string_view name) {
  if (name == "photons_per_second") return Unit::photons_per_second;
  if (name == "meters") return Unit::meters;
  if (name == "radians") return Unit::radians;
  throw InvalidSpecError("unknown unit '" + std::string(name) + "'");
}

long signed_bin(std::size_t k, std::size_t n) {
  const auto sk = static_cast<long>(k);
  const auto sn = static_cast<long>(n);
  return sk < (sn + 1) / 2 ? sk : sk - sn;
}

std::size_t storage_bin(long signed_index, std::size_t n) {
  const auto sn = static_cast<long>(n);
  return static_cast<std::size_t>(signed_index < 0 ? signed_index + sn : signed_index);
}

double bin_offset(std::size_t k, std::size_t n, double sample_rate) {
  return static_cast<double>(signed_bin(k, n)) * sample_rate / static_cast<double>(n);
}

BinBand band_bins(double bandwidth, std::size_t n, double sample_rate) {
  // Edges are snapped to the bin grid; the small slack keeps exact multiples
  // of the bin spacing on the grid despite rounding.
  const double df = sample_rate / static_cast<double>(n);
  const double half = bandwidth / (2.0 * df);
  constexpr double slack = 1e-9;
  BinBand band;
  band.lo = static_cast<long>(std::ceil(-half - slack));
  band.hi = static_cast<long>(std::ceil(half - slack));
  const long max_hi = static_cast<long>(n) / 2 + static_cast<long>(n % 2);
  const long min_lo = -static_cast<long>(n) / 2;
  if (band.lo < min_lo) band.lo = min_lo;
  if (band.hi > max_hi) band.hi = max_hi;
  return band;
}

double mean_power(const ComplexEnvelope& env) {
  if (env.empty()) return 0.0;
  long double acc = 0.0L;
  for (const auto& z : env.samples) acc += std::norm(z);
  return static_cast<double>(acc / static_cast<long double>(env.size()));
}

}  // namespace optocorr
