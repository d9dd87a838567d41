#pragma once

#include <json.hpp>

#include <atomic>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ddp/clock.hpp"
#include "ddp/pipeline.hpp"
#include "ddp/query.hpp"

namespace ddp::harness {

/// Parses one manifest object; `base_dir` resolves relative image paths.
/// Throws ManifestParseError(line) on schema violations.
[[nodiscard]] Query parse_manifest_entry(const nlohmann::json& j, std::size_t line,
                                         const std::string& base_dir);

/// JSONL manifest, one query per line (blank lines skipped). Throws
/// ManifestParseError, DuplicateId or MissingImage.
[[nodiscard]] std::vector<Query> load_manifest(const std::string& path);

struct BatchOptions {
  int concurrency = 1;
  Clock* clock = nullptr;                  // defaults to steady_clock()
  std::string jsonl_path;                  // incremental record output; empty for none
  const std::atomic<bool>* cancel = nullptr;
  std::function<void(const pipeline::RunRecord&)> on_record;
};

/// Runs `work(i)` for i in [0, n) on `concurrency` workers. Each worker is a
/// participant of `clock` while it runs.
void run_pool(std::size_t n, int concurrency, Clock& clock,
              const std::function<void(std::size_t)>& work);

/// run_query over every query with at most `concurrency` in flight. Failures
/// and cancellations become failed records. Output is sorted by query id.
[[nodiscard]] std::vector<pipeline::RunRecord> run_batch(
    const std::vector<Query>& queries, const pipeline::PipelineConfig& config,
    gateway::Gateway& gw, const BatchOptions& options = {},
    const critic::PromptLibrary& library = critic::PromptLibrary::builtin());

struct ClassScore {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t abstained = 0;
  std::size_t failed = 0;
  [[nodiscard]] std::size_t incorrect() const { return total - correct - abstained - failed; }
  [[nodiscard]] double pass_at_1() const;
};

struct ScoreSummary {
  ClassScore overall;
  double mean_latency_ms = 0.0;
  std::map<std::string, ClassScore> by_class;
  std::map<std::string, ClassScore> by_tag;
  std::string config_digest;  // "mixed" when records disagree

  [[nodiscard]] nlohmann::json to_json() const;
};

inline constexpr const char* kUnclassified = "unclassified";

/// Pass@1 = 100 * correct / total; abstained and failed records count as wrong.
/// Throws EmptyRecordSet for no records.
[[nodiscard]] ScoreSummary score(const std::vector<pipeline::RunRecord>& records);

/// "%.2f" of a percentage.
[[nodiscard]] std::string percent(double v);
/// The scripting line printed by `ddp run` and `ddp score`: "Pass@1: 75.00% (3/4)".
[[nodiscard]] std::string pass_line(const ScoreSummary& s);

enum class ReportFormat { kMarkdown, kCsv };

[[nodiscard]] std::string report(const ScoreSummary& summary,
                                 const std::vector<pipeline::RunRecord>& records,
                                 ReportFormat format);

[[nodiscard]] std::vector<pipeline::RunRecord> load_records(const std::string& path);

}  // namespace ddp::harness
