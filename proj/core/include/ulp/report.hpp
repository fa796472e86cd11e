#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ulp/experiment.hpp"

namespace ulp {

/// Runs sharing (scheme, channel, redundancy), in first-appearance order.
struct RunGroup {
  std::string scheme;
  std::string channel;
  double redundancy = 0.0;
  std::vector<RunMetrics> runs;
};

std::vector<RunGroup> group_runs(std::span<const RunMetrics> metrics);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n-1) standard deviation; 0 for n = 1
};

MeanStd mean_std(std::span<const double> values);

/// scheme,channel,redundancy,frame_type,mean,stddev,n_seeds,zero_loss_seeds
/// One row per frame type (I, P, B) and one "all" row per group. Seeds with
/// no lost packets of a type contribute a rate of 1 and are counted in the
/// last column.
std::string recovery_csv(std::span<const RunMetrics> metrics);

/// scheme,channel,redundancy,mean_distortion_proxy,stddev
std::string quality_csv(std::span<const RunMetrics> metrics);

/// Writes recovery.csv and quality.csv into dir (created if missing).
/// Throws Error{Input} on empty metrics, Error{Io} when dir is unwritable.
void report(std::span<const RunMetrics> metrics, const std::filesystem::path& dir);

void to_json(nlohmann::json& j, const TypeCounters& t);
void from_json(const nlohmann::json& j, TypeCounters& t);
void to_json(nlohmann::json& j, const RunMetrics& m);
void from_json(const nlohmann::json& j, RunMetrics& m);

void save_metrics(std::span<const RunMetrics> metrics, const std::filesystem::path& path);
std::vector<RunMetrics> load_metrics(const std::filesystem::path& path);

}  // namespace ulp
