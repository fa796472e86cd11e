// ulpsim: trace generation, protected-stream simulation and CSV reporting.

#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ulp/config.hpp"
#include "ulp/error.hpp"
#include "ulp/experiment.hpp"
#include "ulp/report.hpp"
#include "ulp/stream.hpp"

namespace {

constexpr const char* kTraceKeys[] = {
    "gop_length", "b_run", "n_gops", "framerate", "trace_seed", "size_i_mean", "size_i_stddev",
    "size_p_mean", "size_p_stddev", "size_b_mean", "size_b_stddev", "size_distribution",
};

constexpr const char* kExperimentKeys[] = {
    "trace_file", "channel_name", "plr", "abl", "seed", "initial_state", "scheme", "redundancy_rate",
    "r_protection", "p_coverage", "D", "L", "n_frames_dfs", "k1_i", "k1_p", "k1_b", "k2", "k3",
    "packet_bytes", "fec_estimate_window", "fec_lossless", "jobs",
};

constexpr const char* kSweepKeys[] = {"schemes", "redundancy_rates", "channels"};

using Overrides = std::vector<std::pair<std::string, std::string>>;

std::string flag_name(std::string key) {
  for (auto& c : key) {
    if (c == '_') c = '-';
  }
  return "--" + key;
}

template <std::size_t N>
void add_key_flags(CLI::App* app, const char* const (&keys)[N], Overrides& overrides) {
  for (const char* key : keys) {
    app->add_option_function<std::string>(
           flag_name(key), [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); },
           fmt::format("Set '{}' (see config keys)", key))
        ->type_name("VALUE");
  }
}

void add_common(CLI::App* app, std::string& config_path, Overrides& overrides) {
  app->add_option("-c,--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
  app->add_option_function<std::string>(
         "--seed-list", [&overrides](const std::string& v) { overrides.emplace_back("seeds", v); },
         "Comma-separated channel seeds")
      ->type_name("LIST");
  app->add_option_function<std::vector<std::string>>(
      "--set",
      [&overrides](const std::vector<std::string>& kvs) {
        for (const auto& kv : kvs) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected key=value, got " + kv);
          overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        }
      },
      "Generic key=value override (repeatable)");
}

ulp::SweepConfig resolve(const std::string& config_path, const Overrides& overrides) {
  ulp::SweepConfig cfg = config_path.empty() ? ulp::SweepConfig{} : ulp::load_config(config_path);
  for (const auto& [k, v] : overrides) ulp::apply_setting(cfg, k, v);
  return cfg;
}

int exit_code(ulp::ErrorKind kind) { return 10 + static_cast<int>(kind); }

void print_summary(const std::vector<ulp::RunMetrics>& runs) {
  for (const auto& g : ulp::group_runs(runs)) {
    std::vector<double> i_rate, all_rate, dist;
    for (const auto& r : g.runs) {
      i_rate.push_back(r.of(ulp::FrameType::I).recovery_rate());
      all_rate.push_back(r.overall.recovery_rate());
      dist.push_back(r.distortion_proxy);
    }
    fmt::print("{:>6} {:>14} red={:<5} seeds={:<3} I-recovery={:.4f} overall={:.4f} distortion={:.1f}\n", g.scheme,
               g.channel, g.redundancy, g.runs.size(), ulp::mean_std(i_rate).mean, ulp::mean_std(all_rate).mean,
               ulp::mean_std(dist).mean);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frame-aware unequal loss protection simulator"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;
  std::string out_path;
  std::string out_dir = ".";
  std::vector<std::string> metrics_files;

  auto* gen = app.add_subcommand("generate-trace", "Generate a synthetic frame trace");
  add_common(gen, config_path, overrides);
  add_key_flags(gen, kTraceKeys, overrides);
  gen->add_option("-o,--out", out_path, "Trace file to write")->required();

  auto* run = app.add_subcommand("run", "Simulate one scheme over all configured seeds");
  add_common(run, config_path, overrides);
  add_key_flags(run, kTraceKeys, overrides);
  add_key_flags(run, kExperimentKeys, overrides);
  run->add_option("-o,--out-dir", out_dir, "Directory for metrics.json, recovery.csv, quality.csv");

  auto* rep = app.add_subcommand("report", "Aggregate metrics files into CSV reports");
  rep->add_option("-m,--metrics", metrics_files, "metrics.json files written by run/sweep")
      ->required()
      ->check(CLI::ExistingFile);
  rep->add_option("-o,--out-dir", out_dir, "Directory for recovery.csv and quality.csv");

  auto* swp = app.add_subcommand("sweep", "Run channels x redundancy rates x schemes");
  add_common(swp, config_path, overrides);
  add_key_flags(swp, kTraceKeys, overrides);
  add_key_flags(swp, kExperimentKeys, overrides);
  add_key_flags(swp, kSweepKeys, overrides);
  swp->add_option("-o,--out-dir", out_dir, "Directory for metrics.json, recovery.csv, quality.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto cfg = resolve(config_path, overrides);
      const auto& g = cfg.base.generator;
      const auto trace = ulp::generate_trace(g.gop, g.n_gops, g.sizes, g.framerate, g.seed);
      ulp::save_trace(trace, out_path);
      fmt::print("wrote {} frames ({} packets) to {}\n", trace.frames.size(), trace.total_packets(), out_path);
    } else if (run->parsed()) {
      const auto cfg = resolve(config_path, overrides);
      const auto runs = ulp::run(cfg.base);
      ulp::report(runs, out_dir);
      ulp::save_metrics(runs, std::filesystem::path(out_dir) / "metrics.json");
      print_summary(runs);
    } else if (rep->parsed()) {
      std::vector<ulp::RunMetrics> all;
      for (const auto& f : metrics_files) {
        auto m = ulp::load_metrics(f);
        all.insert(all.end(), m.begin(), m.end());
      }
      ulp::report(all, out_dir);
      fmt::print("reported {} runs into {}\n", all.size(), out_dir);
    } else if (swp->parsed()) {
      const auto cfg = resolve(config_path, overrides);
      const auto runs = ulp::sweep(cfg);
      ulp::report(runs, out_dir);
      ulp::save_metrics(runs, std::filesystem::path(out_dir) / "metrics.json");
      print_summary(runs);
    }
  } catch (const ulp::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", std::string(ulp::to_string(e.kind())).c_str(), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error [internal]: %s\n", e.what());
    return 1;
  }
  return 0;
}
