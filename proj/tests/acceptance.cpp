#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "optocorr/cli.hpp"
#include "optocorr/constants.hpp"
#include "optocorr/estimators.hpp"
#include "optocorr/io.hpp"
#include "optocorr/noise.hpp"
#include "optocorr/physics.hpp"
#include "optocorr/simulation.hpp"

using namespace optocorr;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(int id, const char* name, bool pass, const std::string& detail, double seconds) {
  std::printf("%s [%d] %-32s %s (%.2f s)\n", pass ? "PASS" : "FAIL", id, name, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int quiet(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return code;
}

void ratio_reference() {
  Timer t;
  std::ostringstream out, err;
  const int code = cli::run({"ratio", "--set", "finesse=300000", "--set", "wavelength_m=800e-9", "--set",
                             "signal_power_w=1e-3", "--set", "mass_kg=1e-6", "--set", "quality_factor=1e6", "--set",
                             "resonance_freq_hz=1e6", "--set", "temperature_k=1"},
                            out, err);
  double value = NAN;
  std::istringstream lines(out.str());
  std::string name;
  while (lines >> name) {
    if (name == "rad_thermal_ratio") {
      lines >> value;
      break;
    }
    std::getline(lines, name);
  }
  verdict(1, "ratio reference", code == 0 && std::abs(value - 2.3) <= 0.01, fmt("printed %.6g", value), t.seconds());
}

void strong_correlation() {
  Timer t;
  const ExperimentParams p;
  const auto records = run_sweep(p, 200, 1);
  double sum_c = 0, sum_d = 0, worst_identity = 0;
  int in_range = 0;
  for (const auto& r : records) {
    const auto rep = correlation_coefficient(r.signal_out, r.meter_displacement);
    sum_c += rep.coefficient;
    sum_d += rep.conditional_dispersion_ratio;
    if (rep.coefficient >= 0.90 && rep.coefficient <= 0.995) ++in_range;
    const double expected = std::sqrt(1.0 - rep.coefficient);
    worst_identity = std::max(worst_identity, std::abs(rep.conditional_dispersion_ratio - expected) / expected);
  }
  const double mean_c = sum_c / 200.0, mean_d = sum_d / 200.0;
  const double elapsed = t.seconds();
  verdict(2, "strong correlation", std::abs(mean_c - 0.962) <= 0.005 && in_range >= 190,
          fmt("mean C %.5f, %d/200 runs in [0.90, 0.995]", mean_c, in_range), elapsed);
  verdict(3, "conditional dispersion", std::abs(mean_d - 0.196) <= 0.01 && worst_identity <= 1e-12,
          fmt("mean ratio %.5f, worst identity error %.2e", mean_d, worst_identity), elapsed);
}

void weak_signal() {
  Timer t;
  ExperimentParams p;
  p.drive_ratio = 0.03;
  const double target = 0.02913;
  const std::vector<std::size_t> checkpoints{10, 20, 50, 100, 200, 500};
  std::vector<double> sq(checkpoints.size(), 0.0);
  int passes = 0;
  const int bases = 10;
  for (int k = 0; k < bases; ++k) {
    const std::uint64_t base = 1000000ull * static_cast<std::uint64_t>(k + 1);
    const auto moments = sweep_moments(p, 500, base);
    const auto trace = sweep_correlation(moments, 0.03 / 1.03, SweepMode::moments);
    if (std::abs(trace.estimate.back() - target) <= 2.5e-3) ++passes;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      const double e = trace.estimate[checkpoints[i] - 1] - target;
      sq[i] += e * e;
    }
  }
  std::vector<double> x, rms;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    x.push_back(static_cast<double>(checkpoints[i]));
    rms.push_back(std::sqrt(sq[i] / bases));
  }
  const double slope = oracle::loglog_slope(x, rms);
  verdict(4, "weak-signal convergence", passes >= 8 && std::abs(slope + 0.5) <= 0.1,
          fmt("%d/10 base seeds within 2.5e-3, RMS slope %.3f", passes, slope), t.seconds());
}

void equipartition() {
  Timer t;
  std::mt19937_64 gen(20240501);
  auto log_uniform = [&gen](double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(gen));
  };
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    ExperimentParams p;
    auto& osc = p.oscillator;
    osc.resonance_freq = log_uniform(1e4, 1e7);
    osc.quality_factor = log_uniform(1e2, 1e7);
    osc.mass = log_uniform(1e-9, 1e-2);
    p.temperature = log_uniform(0.1, 1000.0);
    const double temperature = p.temperature;
    const double integral = oracle::integrate_peaked(
        [&](double f) { return thermal_psd(p, f); }, osc.resonance_freq,
        osc.resonance_freq / (2.0 * osc.quality_factor));
    const double omega = osc.angular_resonance();
    const double expected = constants::boltzmann * temperature / (osc.mass * omega * omega);
    worst = std::max(worst, std::abs(integral / expected - 1.0));
  }
  verdict(5, "equipartition", worst < 0.01, fmt("worst relative error %.2e over 20 oscillators", worst), t.seconds());
}

void all_pass() {
  Timer t;
  const OpticalCavity cavity;
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    const double f = 1e2 * std::pow(1e6, i / 9999.0) - 1e2 + i * 10.0;
    worst = std::max(worst, std::abs(std::abs(intensity_reflection(cavity, f)) - 1.0));
  }
  verdict(6, "all-pass reflection", worst < 1e-12, fmt("max ||r|-1| %.2e", worst), t.seconds());
}

void oracle_equivalence() {
  Timer t;
  const std::size_t draws = 4000;
  bool pass = true;
  std::string detail;
  NoiseSpec spec;
  spec.bandwidth = 400.0;
  spec.target_psd = 1.0;
  spec.duration = 0.2;
  spec.sample_rate = 4000.0;
  spec.center_freq = 1.123e6;
  for (double ratio : {0.04, 1.0, 25.0}) {
    std::vector<double> cs;
    for (std::size_t d = 0; d < draws; ++d) {
      spec.seed = 2 * d + 1;
      auto zs = gen_band_limited_gaussian(spec);
      spec.seed = 2 * d + 2;
      auto zm = gen_band_limited_gaussian(spec);
      for (std::size_t i = 0; i < zs.size(); ++i) {
        zs.samples[i] *= std::sqrt(ratio);
        zm.samples[i] += zs.samples[i];
      }
      cs.push_back(correlation_coefficient(zs, zm).coefficient);
    }
    const auto lib = oracle::summarize(cs);
    const auto ref = oracle::brute_force_correlation(ratio, 80, draws, 77 + static_cast<std::uint64_t>(ratio * 100));
    const double z = std::abs(lib.mean - ref.mean) / std::hypot(lib.standard_error, ref.standard_error);
    pass = pass && z <= 3.0;
    detail += fmt("%s%g: %.5f vs %.5f (%.1f se)", detail.empty() ? "" : "; ", ratio, lib.mean, ref.mean, z);
  }
  verdict(7, "estimator oracle equivalence", pass, detail, t.seconds());
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (!fs::exists(b / name)) {
      why = name.string() + " missing";
      return false;
    }
    if (io::read_text(entry.path()) != io::read_text(b / name)) {
      why = name.string() + " differs";
      return false;
    }
    ++count;
  }
  return count > 1;
}

void determinism() {
  Timer t;
  const fs::path root = fs::temp_directory_path() / "optocorr_acceptance";
  fs::remove_all(root);
  const auto first = [&](const char* cmd) { return (root / cmd / "first").string(); };
  const auto again = [&](const char* cmd) { return (root / cmd / "again").string(); };

  bool pass = quiet({"ratio", "--out", first("ratio")}) == 0 &&
              quiet({"simulate", "--seed", "314", "--set", "temperature_k=77", "--out", first("simulate")}) == 0 &&
              quiet({"correlate", first("simulate"), "--set", "hist_bins=48", "--out", first("correlate")}) == 0 &&
              quiet({"sweep", "--seed", "9", "--runs", "60", "--mode", "per-run", "--out", first("sweep")}) == 0;
  std::string detail = pass ? "" : "first pass failed";
  for (const char* cmd : {"ratio", "simulate", "correlate", "sweep"}) {
    if (!pass) break;
    const std::string manifest = first(cmd) + "/manifest.json";
    if (quiet({cmd, "--config", manifest, "--out", again(cmd)}) != 0) {
      pass = false;
      detail = std::string(cmd) + " re-run failed";
      break;
    }
    std::string why;
    if (!same_tree(first(cmd), again(cmd), why)) {
      pass = false;
      detail = std::string(cmd) + ": " + why;
    }
  }
  if (pass) detail = "ratio, simulate, correlate, sweep re-runs byte-identical";
  verdict(8, "determinism from manifests", pass, detail, t.seconds());
}

}  // namespace

int main() {
  const auto guarded = [](int id, void (*check)()) {
    try {
      check();
    } catch (const std::exception& e) {
      verdict(id, "exception", false, e.what(), 0.0);
    }
  };
  guarded(1, ratio_reference);
  guarded(2, strong_correlation);
  guarded(4, weak_signal);
  guarded(5, equipartition);
  guarded(6, all_pass);
  guarded(7, oracle_equivalence);
  guarded(8, determinism);
  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
