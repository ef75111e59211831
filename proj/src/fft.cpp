#include "optocorr/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace optocorr::fft {

namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const { fftw_destroy_plan(plan); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// FFTW planning is not thread-safe; execution with fftw_execute_dft on fresh
// arrays is. Plans are cached per (size, sign) for the process lifetime.
fftw_plan plan_for(int n, int sign) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, PlanHandle> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, sign}];
  if (!slot) {
    std::vector<std::complex<double>> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
    slot.reset(fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED));
  }
  return slot.get();
}

std::vector<std::complex<double>> execute(const std::vector<std::complex<double>>& in, int sign) {
  std::vector<std::complex<double>> out(in.size());
  if (in.empty()) return out;
  auto work = in;
  fftw_execute_dft(plan_for(static_cast<int>(in.size()), sign), reinterpret_cast<fftw_complex*>(work.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& in) {
  return execute(in, FFTW_FORWARD);
}

std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& in) {
  auto out = execute(in, FFTW_BACKWARD);
  const double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
  for (auto& z : out) z *= scale;
  return out;
}

}  // namespace optocorr::fft
