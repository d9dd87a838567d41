#include <cmath>
#include <cstdio>
#include <fstream>

#include "ddp/errors.hpp"
#include "ddp/harness.hpp"

namespace ddp::harness {

using nlohmann::json;
using pipeline::RecordStatus;
using pipeline::RunRecord;

double ClassScore::pass_at_1() const {
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

namespace {

void tally(ClassScore& s, const RunRecord& r) {
  ++s.total;
  if (r.status == RecordStatus::kFailed) {
    ++s.failed;
  } else if (!r.verdict || r.verdict->abstained) {
    ++s.abstained;
  } else if (r.correct.value_or(false)) {
    ++s.correct;
  }
}

json class_json(const ClassScore& s) {
  return {{"total", s.total},
          {"correct", s.correct},
          {"incorrect", s.incorrect()},
          {"abstained", s.abstained},
          {"failed", s.failed},
          // Rounded to the two decimals that reports print.
          {"pass_at_1", std::round(s.pass_at_1() * 100.0) / 100.0}};
}

}  // namespace

ScoreSummary score(const std::vector<RunRecord>& records) {
  if (records.empty()) throw EmptyRecordSet("no run records to score");
  ScoreSummary s;
  double latency = 0.0;
  for (const RunRecord& r : records) {
    tally(s.overall, r);
    tally(s.by_class[r.class_id.value_or(kUnclassified)], r);
    for (const std::string& tag : r.tags) tally(s.by_tag[tag], r);
    latency += r.wall_ms;
    if (s.config_digest.empty()) {
      s.config_digest = r.config_digest;
    } else if (s.config_digest != r.config_digest) {
      s.config_digest = "mixed";
    }
  }
  s.mean_latency_ms = latency / static_cast<double>(records.size());
  return s;
}

json ScoreSummary::to_json() const {
  json classes = json::object();
  for (const auto& [id, cs] : by_class) classes[id] = class_json(cs);
  json tags = json::object();
  for (const auto& [tag, cs] : by_tag) tags[tag] = class_json(cs);
  json j = class_json(overall);
  j["mean_latency_ms"] = std::round(mean_latency_ms * 1000.0) / 1000.0;
  j["config_digest"] = config_digest;
  j["by_class"] = classes;
  j["by_tag"] = tags;
  return j;
}

std::string pass_line(const ScoreSummary& s) {
  return "Pass@1: " + percent(s.overall.pass_at_1()) + "% (" + std::to_string(s.overall.correct) +
         "/" + std::to_string(s.overall.total) + ")";
}

std::vector<RunRecord> load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open records file " + path);
  std::vector<RunRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw InvalidArgument("records line " + std::to_string(n) + " is not valid JSON");
    }
    out.push_back(RunRecord::from_json(j));
  }
  return out;
}

}  // namespace ddp::harness
