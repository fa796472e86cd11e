#include "ulp/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "ulp/error.hpp"

namespace ulp {

std::vector<RunGroup> group_runs(std::span<const RunMetrics> metrics) {
  std::vector<RunGroup> groups;
  for (const auto& m : metrics) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const RunGroup& g) {
      return g.scheme == m.scheme && g.channel == m.channel && g.redundancy == m.redundancy;
    });
    if (it == groups.end()) {
      groups.push_back({m.scheme, m.channel, m.redundancy, {}});
      it = std::prev(groups.end());
    }
    it->runs.push_back(m);
  }
  return groups;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd r;
  if (values.empty()) return r;
  for (double v : values) r.mean += v;
  r.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return r;
}

namespace {

void write_recovery_row(std::string& out, const RunGroup& g, std::string_view type_label,
                        const TypeCounters& (*pick)(const RunMetrics&, std::size_t), std::size_t type_index) {
  std::vector<double> rates;
  std::size_t zero_loss = 0;
  for (const auto& r : g.runs) {
    const auto& t = pick(r, type_index);
    rates.push_back(t.recovery_rate());
    if (t.no_loss()) ++zero_loss;
  }
  const auto ms = mean_std(rates);
  out += fmt::format("{},{},{},{},{:.6f},{:.6f},{},{}\n", g.scheme, g.channel, g.redundancy, type_label, ms.mean,
                     ms.stddev, g.runs.size(), zero_loss);
}

const TypeCounters& pick_type(const RunMetrics& m, std::size_t i) { return m.by_type[i]; }
const TypeCounters& pick_overall(const RunMetrics& m, std::size_t) { return m.overall; }

}  // namespace

std::string recovery_csv(std::span<const RunMetrics> metrics) {
  std::string out = "scheme,channel,redundancy,frame_type,mean,stddev,n_seeds,zero_loss_seeds\n";
  for (const auto& g : group_runs(metrics)) {
    for (FrameType t : {FrameType::I, FrameType::P, FrameType::B}) {
      write_recovery_row(out, g, to_string(t), pick_type, static_cast<std::size_t>(t));
    }
    write_recovery_row(out, g, "all", pick_overall, 0);
  }
  return out;
}

std::string quality_csv(std::span<const RunMetrics> metrics) {
  std::string out = "scheme,channel,redundancy,mean_distortion_proxy,stddev\n";
  for (const auto& g : group_runs(metrics)) {
    std::vector<double> values;
    for (const auto& r : g.runs) values.push_back(r.distortion_proxy);
    const auto ms = mean_std(values);
    out += fmt::format("{},{},{},{:.6f},{:.6f}\n", g.scheme, g.channel, g.redundancy, ms.mean, ms.stddev);
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, fmt::format("cannot open '{}' for writing", path.string()));
  out << content;
  if (!out) throw Error(ErrorKind::Io, fmt::format("failed writing '{}'", path.string()));
}

}  // namespace

void report(std::span<const RunMetrics> metrics, const std::filesystem::path& dir) {
  if (metrics.empty()) throw Error(ErrorKind::Input, "no run metrics to report");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  write_file(dir / "recovery.csv", recovery_csv(metrics));
  write_file(dir / "quality.csv", quality_csv(metrics));
}

void to_json(nlohmann::json& j, const TypeCounters& t) {
  j = nlohmann::json{{"sent_packets", t.sent_packets},
                     {"received_packets", t.received_packets},
                     {"lost_packets", t.lost_packets},
                     {"recovered_packets", t.recovered_packets},
                     {"protected_packets", t.protected_packets},
                     {"frames", t.frames},
                     {"frames_effectively_lost", t.frames_effectively_lost},
                     {"recovery_rate", t.recovery_rate()}};
}

void from_json(const nlohmann::json& j, TypeCounters& t) {
  j.at("sent_packets").get_to(t.sent_packets);
  j.at("received_packets").get_to(t.received_packets);
  j.at("lost_packets").get_to(t.lost_packets);
  j.at("recovered_packets").get_to(t.recovered_packets);
  j.at("protected_packets").get_to(t.protected_packets);
  j.at("frames").get_to(t.frames);
  j.at("frames_effectively_lost").get_to(t.frames_effectively_lost);
}

void to_json(nlohmann::json& j, const RunMetrics& m) {
  j = nlohmann::json{{"seed", m.seed},
                     {"scheme", m.scheme},
                     {"channel", m.channel},
                     {"redundancy", m.redundancy},
                     {"I", m.by_type[0]},
                     {"P", m.by_type[1]},
                     {"B", m.by_type[2]},
                     {"overall", m.overall},
                     {"distortion_proxy", m.distortion_proxy},
                     {"fec_packets_sent", m.fec_packets_sent},
                     {"fec_packets_lost", m.fec_packets_lost},
                     {"fec_bits_sent", m.fec_bits_sent},
                     {"fec_bitrate", m.fec_bitrate},
                     {"budget_bits", m.budget_bits},
                     {"r_protection", m.r_protection},
                     {"stream_bitrate", m.stream_bitrate},
                     {"duration_s", m.duration_s}};
}

void from_json(const nlohmann::json& j, RunMetrics& m) {
  j.at("seed").get_to(m.seed);
  j.at("scheme").get_to(m.scheme);
  j.at("channel").get_to(m.channel);
  j.at("redundancy").get_to(m.redundancy);
  j.at("I").get_to(m.by_type[0]);
  j.at("P").get_to(m.by_type[1]);
  j.at("B").get_to(m.by_type[2]);
  j.at("overall").get_to(m.overall);
  j.at("distortion_proxy").get_to(m.distortion_proxy);
  j.at("fec_packets_sent").get_to(m.fec_packets_sent);
  j.at("fec_packets_lost").get_to(m.fec_packets_lost);
  j.at("fec_bits_sent").get_to(m.fec_bits_sent);
  j.at("fec_bitrate").get_to(m.fec_bitrate);
  j.at("budget_bits").get_to(m.budget_bits);
  j.at("r_protection").get_to(m.r_protection);
  j.at("stream_bitrate").get_to(m.stream_bitrate);
  j.at("duration_s").get_to(m.duration_s);
}

void save_metrics(std::span<const RunMetrics> metrics, const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& m : metrics) j.push_back(m);
  write_file(path, j.dump(2) + "\n");
}

std::vector<RunMetrics> load_metrics(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open metrics '{}'", path.string()));
  try {
    return nlohmann::json::parse(in).get<std::vector<RunMetrics>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, fmt::format("metrics '{}': {}", path.string(), e.what()));
  }
}

}  // namespace ulp
