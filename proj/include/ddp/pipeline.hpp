#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "ddp/agent.hpp"
#include "ddp/clock.hpp"
#include "ddp/critic.hpp"
#include "ddp/gateway.hpp"
#include "ddp/query.hpp"

namespace ddp::pipeline {

struct StageToggles {
  bool tools = true;
  bool prompts = true;
  bool degradation = true;
};

struct PipelineConfig {
  double sigma1 = raster::kDefaultSigma1;
  int r_mid = 150;
  int r_low = 80;
  double heavy_sigma = raster::kDefaultHeavySigma;
  int max_tool_iters = agent::kDefaultMaxIters;
  StageToggles toggles;
  gateway::GatewayConfig gateway;
  int concurrency = 4;

  /// Throws ConfigError when an invariant fails (r_low <= r_mid, heavy_sigma > sigma1, ...).
  void validate() const;

  /// Strict parse: unknown keys anywhere are rejected, missing keys take defaults.
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::string& path);
  [[nodiscard]] nlohmann::json to_json() const;
  /// First 16 hex chars of SHA-256 over the canonical JSON form.
  [[nodiscard]] std::string digest() const;
};

struct EvidenceSummary {
  int step = 0;
  std::string tool;
  nlohmann::json params;
  int width = 0;
  int height = 0;
};

enum class RecordStatus { kOk, kFailed };

struct RunRecord {
  std::string query_id;
  RecordStatus status = RecordStatus::kOk;
  std::string error;  // failed records only
  std::optional<std::string> class_id;
  bool classifier_fallback = false;
  std::vector<EvidenceSummary> evidence;
  agent::AgentTranscript transcript;
  std::optional<critic::Verdict> verdict;
  std::optional<char> answer;
  std::optional<bool> correct;  // set when ground truth is present
  std::vector<std::string> tags;
  double wall_ms = 0.0;
  int gateway_calls = 0;
  int gateway_attempts = 0;
  std::string config_digest;

  [[nodiscard]] nlohmann::json to_json() const;
  static RunRecord from_json(const nlohmann::json& j);
  /// Same record with the latency field zeroed, for order/worker comparisons.
  [[nodiscard]] RunRecord without_latency() const;
};

/// Smooth -> classify -> downsample(r_mid) -> agent -> critic, honouring the
/// stage toggles. Decode and gateway failures become a failed record.
[[nodiscard]] RunRecord run_query(const Query& query, const PipelineConfig& config,
                                  gateway::Gateway& gw,
                                  const critic::PromptLibrary& library = critic::PromptLibrary::builtin(),
                                  Clock& clock = steady_clock());

}  // namespace ddp::pipeline
