// Command-line front end: single operating point (`trial`) or a sweep.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "declip/config.hpp"
#include "declip/harness.hpp"
#include "declip/report.hpp"

namespace {

using declip::RunSettings;

// Flags that share a key with the config file. Values are kept as raw strings
// so the file is applied first and flags override it.
const char* const kKeys[] = {"n",         "mod",         "cr",      "ebn0",       "p",
                             "frames",    "seed",        "algos",   "phase-mode", "out",
                             "taps",      "cp",          "panc-iterations",       "phi-max",
                             "k-inflation", "whitened",  "noise-ref", "threads",  "timing",
                             "generator"};

const char* help_for(const std::string& key) {
  static const std::map<std::string, const char*> help = {
      {"n", "Subcarriers (power of two)"},
      {"mod", "Square QAM order"},
      {"cr", "Clipping ratio(s), comma-separated"},
      {"ebn0", "Eb/N0 in dB, comma-separated"},
      {"p", "Reliable-carrier count(s), comma-separated"},
      {"frames", "Frames per operating point"},
      {"seed", "Master seed"},
      {"algos", "Subset of unrecovered,wiht,oracle,panc"},
      {"phase-mode", "Amplifier phase response: off or saturating"},
      {"out", "CSV output path; a .py plot script is written next to it"},
      {"taps", "Channel taps (<= cp)"},
      {"cp", "Cyclic-prefix length"},
      {"panc-iterations", "Iterations of the PANC baseline"},
      {"phi-max", "Saturated phase rotation in radians"},
      {"k-inflation", "Multiplier applied to the sparsity estimate"},
      {"whitened", "Noise-whitened BLUE: on/off"},
      {"noise-ref", "receiver or channel-input"},
      {"threads", "Worker threads per operating point"},
      {"timing", "Record runtimes (off gives byte-identical CSV)"},
      {"generator", "Random stream generator (splitmix64)"},
  };
  return help.at(key);
}

struct FlagSet {
  std::map<std::string, std::string> values;
  std::string config;
  std::string sweep;

  void attach(CLI::App* app, bool with_sweep) {
    app->add_option("--config", config, "key=value file; command-line flags override it")
        ->check(CLI::ExistingFile);
    for (const char* k : kKeys) {
      app->add_option(std::string("--") + k, values[k], help_for(k));
    }
    if (with_sweep) {
      app->add_option("--sweep", sweep, "Swept parameter")
          ->check(CLI::IsMember({"p", "ebn0", "cr"}));
    }
  }

  RunSettings resolve(CLI::App* app) const {
    RunSettings s;
    if (!config.empty()) declip::apply_config_file(s, config);
    for (const char* k : kKeys) {
      if (app->count(std::string("--") + k) > 0) declip::apply_setting(s, k, values.at(k));
    }
    if (!sweep.empty()) declip::apply_setting(s, "sweep", sweep);
    return s;
  }
};

void print_summary(const declip::SweepResult& r) {
  std::printf("%-12s %-12s %-24s %-14s %-12s\n", "param", "algo", "ber", "mults/frame", "ms/frame");
  for (const auto& row : r.rows) {
    std::printf("%-12g %-12s %-24.6e %-14.1f %-12.4f\n", row.param, row.algo.c_str(), row.ber,
                row.mult_count, row.runtime_ms);
  }
  for (const auto& p : r.points) {
    std::fprintf(stderr, "param=%g noise_var=%.6g rx_power=%.6g mean|supp c|=%.2f channel_redraws=%llu",
                 p.param, p.noise_var, p.received_power, p.mean_clip_support,
                 static_cast<unsigned long long>(p.channel_redraws));
    for (const auto& [a, count] : p.fallbacks) {
      if (count > 0) {
        std::fprintf(stderr, " %s_fallbacks=%llu", std::string(declip::algorithm_name(a)).c_str(),
                     static_cast<unsigned long long>(count));
      }
    }
    std::fprintf(stderr, "\n");
  }
}

void write_outputs(const declip::SweepResult& r, declip::SweepParam swept, const std::filesystem::path& out) {
  if (out.empty()) return;
  declip::emit_csv(r, out);
  auto script = out;
  script.replace_extension(".py");
  declip::emit_plot_script(r, swept, out, script);
  std::fprintf(stderr, "wrote %s and %s\n", out.string().c_str(), script.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OFDM clipping-compensation simulator"};
  app.require_subcommand(1);

  FlagSet trial_flags;
  auto* trial = app.add_subcommand("trial", "Run one operating point (first value of each list)");
  trial_flags.attach(trial, false);

  FlagSet sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter over its list of values");
  sweep_flags.attach(sweep, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (trial->parsed()) {
      RunSettings s = trial_flags.resolve(trial);
      const auto pt = declip::first_point(s.cfg);
      s.cfg.cr = {pt.cr};
      s.cfg.ebn0_db = {pt.ebn0_db};
      s.cfg.reliable = {pt.reliable};
      const auto swept = s.sweep.value_or(declip::SweepParam::EbN0);
      const auto result = declip::run_sweep(s.cfg, swept);
      print_summary(result);
      write_outputs(result, swept, s.out);
    } else {
      RunSettings s = sweep_flags.resolve(sweep);
      if (!s.sweep) throw std::invalid_argument("sweep: --sweep {p,ebn0,cr} is required");
      const auto result = declip::run_sweep(s.cfg, *s.sweep);
      print_summary(result);
      write_outputs(result, *s.sweep, s.out);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
