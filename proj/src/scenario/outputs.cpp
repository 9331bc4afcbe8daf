#include "hrrm/scenario/outputs.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace hrrm::scenario {

using json = nlohmann::ordered_json;

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string metrics_csv(const std::vector<sim::MetricsRow>& rows) {
  std::string out = kMetricsHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.epoch) + ',' + std::to_string(r.end_slot) + ',' + to_string(r.flow) +
           ',' + to_string(r.ue) + ',' + std::string(to_string(r.cls)) + ',' + r.mode + ',' +
           r.legs + ',' + fixed(r.arrived_bits, 0) + ',' + fixed(r.delivered_bits, 0) + ',' +
           fixed(r.throughput_bps, 3) + ',' + std::to_string(r.sdus_delivered) + ',' +
           std::to_string(r.sdus_lost) + '\n';
  }
  return out;
}

std::string summary_json(const sim::MetricsReport& report) {
  json root;
  root["name"] = report.name;
  root["seed"] = report.seed;
  root["slots"] = report.slots;
  root["slot_seconds"] = report.slot_seconds;
  root["total_delivered_bits"] = report.total_delivered_bits;

  json access;
  access["attempts"] = report.access.attempts;
  access["successes"] = report.access.successes;
  access["collisions"] = report.access.collisions;
  access["deferred"] = report.access.deferred;
  access["success_rate"] = report.access.success_rate;
  root["access"] = access;

  json fairness = json::object();
  for (const auto& [cls, v] : report.fairness) fairness[std::string(to_string(cls))] = optional_number(v);
  root["fairness"] = fairness;

  json util = json::object();
  for (const auto& [key, v] : report.partition_utilization) util[key] = v;
  root["partition_utilization"] = util;

  json cells = json::object();
  for (const auto& [cell, bits] : report.cell_served_bits) cells[to_string(cell)] = bits;
  root["cell_served_bits"] = cells;

  root["steering"] = {{"uts_epochs", report.uts_epochs},
                      {"actions", report.steering_actions},
                      {"handovers", report.handovers},
                      {"ping_pongs", report.ping_pongs}};

  json flows = json::array();
  for (const auto& f : report.flows) {
    json j;
    j["flow"] = f.flow.value;
    j["ue"] = f.ue.value;
    j["class"] = to_string(f.cls);
    j["mode"] = f.mode;
    j["arrived_bits"] = f.arrived_bits;
    j["served_bits"] = f.served_bits;
    j["delivered_bits"] = f.delivered_bits;
    j["throughput_bps"] = f.throughput_bps;
    j["latency_ms"] = {{"p50", optional_number(f.latency_p50_ms)},
                       {"p95", optional_number(f.latency_p95_ms)},
                       {"p99", optional_number(f.latency_p99_ms)}};
    j["sdus_arrived"] = f.sdus_arrived;
    j["sdus_delivered"] = f.sdus_delivered;
    j["sdus_lost"] = f.sdus_lost;
    j["duplicates_discarded"] = f.duplicates_discarded;
    j["deadline_misses"] = f.deadline_misses;
    json split = json::object();
    for (const auto& [cell, share] : f.leg_split) split[to_string(cell)] = share;
    j["leg_split"] = split;
    flows.push_back(j);
  }
  root["flows"] = flows;
  return root.dump(2) + "\n";
}

std::string events_log(const std::vector<sim::WorldEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    out += std::to_string(e.slot) + '\t' + e.subsystem + '\t' + e.kind + '\t' + e.details + '\n';
  }
  return out;
}

void write_outputs(const std::filesystem::path& dir, const sim::SimulationResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> files = {
      {kMetricsFile, metrics_csv(result.rows)},
      {kSummaryFile, summary_json(result.report)},
      {kEventsFile, events_log(result.events)}};

  std::vector<fs::path> temps;
  auto discard = [&] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [name, content] : files) {
    const fs::path tmp = dir / (name + ".tmp");
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
      discard();
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], dir / files[i].first, ec);
    if (ec) {
      discard();
      throw std::runtime_error("cannot move " + temps[i].string() + ": " + ec.message());
    }
  }
}

}  // namespace hrrm::scenario
