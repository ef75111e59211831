#include "optocorr/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "optocorr/config.hpp"
#include "optocorr/errors.hpp"
#include "optocorr/estimators.hpp"
#include "optocorr/io.hpp"
#include "optocorr/noise.hpp"
#include "optocorr/simulation.hpp"

namespace optocorr::cli {

namespace {

namespace fs = std::filesystem;
using json = io::json;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::string> mode;
  std::vector<std::string> sets;
  std::string out_dir;
  std::string run_dir;
  bool plot = false;
};

RunConfig resolve_config(const Options& opt) {
  RunConfig config = opt.config_path.empty() ? RunConfig{} : load_config_file(opt.config_path);
  for (const auto& s : opt.sets) apply_override(config, s);
  if (opt.seed) apply_override(config, "seed=" + std::to_string(*opt.seed));
  if (opt.runs) apply_override(config, "runs=" + std::to_string(*opt.runs));
  if (opt.mode) apply_override(config, "mode=" + *opt.mode);
  try {
    config.params.validate();
  } catch (const InvalidSpecError& e) {
    throw ConfigError(std::string("invalid parameters: ") + e.what());
  }
  return config;
}

// Empty when no destination was requested and none is configured.
std::optional<fs::path> output_dir(const Options& opt, const RunConfig& config, const char* command,
                                   bool require) {
  if (!opt.out_dir.empty()) return fs::path(opt.out_dir);
  if (!config.output_dir.empty()) return fs::path(config.output_dir);
  if (const char* root = std::getenv(kOutputRootEnv); root && *root) return fs::path(root) / command;
  if (require) return fs::path("optocorr_out") / command;
  return std::nullopt;
}

json manifest_header(const char* kind, const RunConfig& config) {
  json m;
  m["manifest_kind"] = kind;
  m["config"] = config_to_json(config);
  m["config_digest"] = config_digest(config);
  m["overrides"] = config.overrides;
  return m;
}

void print_value(std::ostream& out, const char* name, double value, const char* unit = "") {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-30s %.6g%s%s\n", name, value, *unit ? " " : "", unit);
  out << buf;
}

int cmd_ratio(const Options& opt, std::ostream& out) {
  const RunConfig config = resolve_config(opt);
  const NoiseBudget b = noise_budget(config.params);
  print_value(out, "rad_thermal_ratio", b.rad_thermal_ratio);
  print_value(out, "thermal_psd", b.thermal_psd, "m^2/Hz");
  print_value(out, "drive_psd", b.drive_psd, "(photons/s)^2/Hz");
  print_value(out, "radiation_psd", b.radiation_psd, "m^2/Hz");
  print_value(out, "shot_floor_psd", b.shot_psd, "m^2/Hz");
  print_value(out, "radiation_to_thermal", b.radiation_to_thermal_db, "dB");
  print_value(out, "shot_to_thermal", b.shot_to_thermal_db, "dB");
  print_value(out, "thermal_band_rms", b.thermal_band_rms, "m");
  print_value(out, "shot_band_rms", b.shot_band_rms, "m");
  print_value(out, "equipartition_variance", b.equipartition_variance, "m^2");
  print_value(out, "signal_photon_flux", b.signal_photon_flux, "photons/s");
  print_value(out, "detuning", b.detuning_linewidths, "linewidths");
  print_value(out, "expected_coefficient", b.expected_coefficient);
  print_value(out, "expected_dispersion_ratio", b.expected_dispersion_ratio);

  if (const auto dir = output_dir(opt, config, "ratio", false)) {
    json j;
    j["config_digest"] = config_digest(config);
    j["seed"] = config.params.seed;
    j["rad_thermal_ratio"] = b.rad_thermal_ratio;
    j["thermal_psd_m2_per_hz"] = b.thermal_psd;
    j["drive_psd_photons2_per_s2_hz"] = b.drive_psd;
    j["radiation_psd_m2_per_hz"] = b.radiation_psd;
    j["shot_floor_psd_m2_per_hz"] = b.shot_psd;
    j["radiation_to_thermal_db"] = b.radiation_to_thermal_db;
    j["shot_to_thermal_db"] = b.shot_to_thermal_db;
    j["thermal_band_rms_m"] = b.thermal_band_rms;
    j["shot_band_rms_m"] = b.shot_band_rms;
    j["equipartition_variance_m2"] = b.equipartition_variance;
    j["signal_photon_flux"] = b.signal_photon_flux;
    j["detuning_linewidths"] = b.detuning_linewidths;
    j["expected_coefficient"] = b.expected_coefficient;
    j["expected_dispersion_ratio"] = b.expected_dispersion_ratio;
    io::write_json(*dir / "noise_budget.json", j);
    auto manifest = manifest_header("ratio", config);
    manifest["files"] = json::array({"noise_budget.json"});
    io::write_json(*dir / "manifest.json", manifest);
  }
  return ok;
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  const RunConfig config = resolve_config(opt);
  const fs::path dir = *output_dir(opt, config, "simulate", true);
  const RunRecord record = calibrate_meter(run_experiment(config.params, config.params.seed));
  io::write_run_directory(dir, record, manifest_header("run", config));
  if (opt.plot) {
    io::write_text(dir / "phase_space.gp",
                   "set datafile separator ','\nset multiplot layout 1,2\nset size square\n"
                   "set title 'signal intensity'\nplot 'signal_out.csv' every ::1 using 2:3 with lines notitle\n"
                   "set title 'meter phase (displacement)'\n"
                   "plot 'meter_displacement.csv' every ::1 using 2:3 with lines notitle\nunset multiplot\n");
  }
  print_value(out, "seed", static_cast<double>(record.seed));
  try {
    const auto report = correlation_coefficient(record.signal_out, record.meter_displacement);
    print_value(out, "coefficient", report.coefficient);
    print_value(out, "conditional_dispersion_ratio", report.conditional_dispersion_ratio);
  } catch (const DegenerateDataError& e) {
    out << "coefficient                    undefined (" << e.what() << ")\n";
  }
  out << "wrote " << dir.string() << "\n";
  return ok;
}

int cmd_correlate(const Options& opt, std::ostream& out) {
  const RunConfig config = resolve_config(opt);
  const std::string run_dir = !opt.run_dir.empty() ? opt.run_dir : config.run_dir;
  if (run_dir.empty()) throw ConfigError("correlate: no run directory given (positional RUN_DIR or run_dir key)");
  const fs::path dir = *output_dir(opt, config, "correlate", true);

  const RunRecord record = io::read_run_directory(run_dir);
  const auto report = correlation_coefficient(record.signal_out, record.meter_displacement);
  const auto conditional = conditional_fluctuations(record.signal_out, record.meter_displacement);
  const auto grid = HistogramGrid::spanning(record.signal_out, config.hist_bins, config.hist_sigma);
  const auto raw_hist = histogram(record.signal_out, grid, "signal_out");
  const auto cond_hist = histogram(conditional, grid, "conditional");
  const auto cmp = compare_histograms(raw_hist, cond_hist, record.signal_out, conditional);

  const std::string run_digest = io::params_digest(record.params_snapshot);
  json j;
  j["seed"] = record.seed;
  j["params_digest"] = run_digest;
  j["config_digest"] = config_digest(config);
  j["report"] = io::report_to_json(report);
  j["histogram"] = {{"bins", grid.bins_x},
                    {"half_width", grid.half_width_x},
                    {"dispersion_ratio", cmp.dispersion_ratio},
                    {"peak_ratio", cmp.peak_ratio},
                    {"outside_raw", raw_hist.n_outside},
                    {"outside_conditional", cond_hist.n_outside}};
  io::write_json(dir / "correlation.json", j);
  const std::string provenance = "seed=" + std::to_string(record.seed) + " params_digest=" + run_digest;
  io::write_histogram_csv(dir / "histogram_signal.csv", raw_hist, provenance);
  io::write_histogram_csv(dir / "histogram_conditional.csv", cond_hist, provenance);

  auto manifest = manifest_header("correlate", config);
  manifest["run_dir"] = run_dir;
  manifest["seed"] = record.seed;
  manifest["files"] = json::array({"correlation.json", "histogram_signal.csv", "histogram_conditional.csv"});
  io::write_json(dir / "manifest.json", manifest);
  if (opt.plot) {
    io::write_text(dir / "distributions.gp",
                   "set datafile separator ','\nset multiplot layout 1,2\n"
                   "set title 'signal intensity'\nsplot 'histogram_signal.csv' every ::2 using 1:2:3 with points notitle\n"
                   "set title 'conditional'\n"
                   "splot 'histogram_conditional.csv' every ::2 using 1:2:3 with points notitle\nunset multiplot\n");
  }

  print_value(out, "coefficient", report.coefficient);
  print_value(out, "conditional_dispersion_ratio", report.conditional_dispersion_ratio);
  print_value(out, "histogram_peak_ratio", cmp.peak_ratio);
  out << "wrote " << dir.string() << "\n";
  return ok;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
  const RunConfig config = resolve_config(opt);
  const fs::path dir = *output_dir(opt, config, "sweep", true);
  const auto moments = sweep_moments(config.params, config.runs, config.params.seed);
  const double ratio = config.params.drive_ratio;
  const double asymptote = ratio / (1.0 + ratio);
  const auto by_moments = sweep_correlation(moments, asymptote, SweepMode::moments);
  const auto by_run = sweep_correlation(moments, asymptote, SweepMode::per_run);
  const auto& primary = config.mode == SweepMode::moments ? by_moments : by_run;

  json j;
  j["seed"] = config.params.seed;
  j["config_digest"] = config_digest(config);
  j["params_digest"] = io::params_digest(config.params);
  j["n_runs"] = config.runs;
  j["primary_mode"] = to_string(config.mode);
  j["final_estimate"] = primary.estimate.back();
  j["final_half_width"] = primary.half_width.back();
  j["traces"] = {{"moments", io::trace_to_json(by_moments)}, {"per-run", io::trace_to_json(by_run)}};
  io::write_json(dir / "sweep.json", j);

  std::string csv = "# seed=" + std::to_string(config.params.seed) + " config_digest=" + config_digest(config) + "\n";
  csv += "n,estimate,half_width,estimate_moments,estimate_per_run,per_run_coefficient,expected_asymptote\n";
  for (std::size_t i = 0; i < primary.size(); ++i) {
    csv += std::to_string(i + 1) + "," + io::format_double(primary.estimate[i]) + "," +
           io::format_double(primary.half_width[i]) + "," + io::format_double(by_moments.estimate[i]) + "," +
           io::format_double(by_run.estimate[i]) + "," + io::format_double(primary.per_run_coefficient[i]) + "," +
           io::format_double(asymptote) + "\n";
  }
  io::write_text(dir / "sweep.csv", csv);

  auto manifest = manifest_header("sweep", config);
  manifest["seed"] = config.params.seed;
  manifest["files"] = json::array({"sweep.json", "sweep.csv"});
  io::write_json(dir / "manifest.json", manifest);
  if (opt.plot) {
    io::write_text(dir / "convergence.gp",
                   "set datafile separator ','\nset logscale x\nset xlabel 'N'\nset ylabel 'C'\n"
                   "plot 'sweep.csv' every ::2 using 1:2 with lines title 'estimate', \\\n"
                   "     '' every ::2 using 1:($7+$3) with lines dt 2 title '1/sqrt(N)', \\\n"
                   "     '' every ::2 using 1:($7-$3) with lines dt 2 notitle\n");
  }

  print_value(out, "runs", static_cast<double>(config.runs));
  print_value(out, "estimate_moments", by_moments.estimate.back());
  print_value(out, "estimate_per_run", by_run.estimate.back());
  print_value(out, "half_width", primary.half_width.back());
  print_value(out, "expected_asymptote", asymptote);
  out << "wrote " << dir.string() << "\n";
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual-beam moving-mirror cavity correlation simulator", "optocorr"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON config file or a manifest written by a previous command");
    sub->add_option("--seed", opt.seed, "base seed");
    sub->add_option("--set", opt.sets, "override one config key (key=value), repeatable")->allow_extra_args(false);
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_flag("--plot", opt.plot, "also write a gnuplot script for the data");
  };

  auto* ratio = app.add_subcommand("ratio", "print the radiation/thermal ratio and the noise budget");
  add_common(ratio);
  auto* simulate = app.add_subcommand("simulate", "run one calibrated acquisition and write its envelopes");
  add_common(simulate);
  auto* correlate = app.add_subcommand("correlate", "correlation report and phase-space histograms of a run");
  add_common(correlate);
  correlate->add_option("run_dir", opt.run_dir, "run directory written by simulate");
  auto* sweep = app.add_subcommand("sweep", "correlation estimate versus number of averaged runs");
  add_common(sweep);
  sweep->add_option("--runs", opt.runs, "number of runs");
  sweep->add_option("--mode", opt.mode, "moments or per-run")->check(CLI::IsMember({"moments", "per-run"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "optocorr: " << e.what() << "\n";
    return config_error;
  }

  try {
    if (ratio->parsed()) return cmd_ratio(opt, out);
    if (simulate->parsed()) return cmd_simulate(opt, out);
    if (correlate->parsed()) return cmd_correlate(opt, out);
    if (sweep->parsed()) return cmd_sweep(opt, out);
  } catch (const ConfigError& e) {
    err << "optocorr: config error: " << e.what() << "\n";
    return config_error;
  } catch (const InvalidSpecError& e) {
    err << "optocorr: invalid configuration: " << e.what() << "\n";
    return config_error;
  } catch (const DegenerateDataError& e) {
    err << "optocorr: degenerate data: " << e.what() << "\n";
    return degenerate_data;
  } catch (const IoError& e) {
    err << "optocorr: I/O error: " << e.what() << "\n";
    return io_error;
  } catch (const std::exception& e) {
    err << "optocorr: " << e.what() << "\n";
    return internal_error;
  }
  return internal_error;
}

}  // namespace optocorr::cli
