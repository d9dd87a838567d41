#pragma once

#include <json.hpp>

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ddp/gateway.hpp"
#include "ddp/raster.hpp"
#include "ddp/raster_ops.hpp"
#include "ddp/taxonomy.hpp"

namespace ddp::agent {

/// A tool invocation as proposed by the model. `tool` is the raw name; it is
/// checked against Ω and the category gate only when the loop executes it.
struct ToolCall {
  std::string tool;
  nlohmann::json params = nlohmann::json::object();
  std::string note;
};

struct Stop {};

struct ParseFailure {
  std::string reason;
};

using ParsedReply = std::variant<ToolCall, Stop, ParseFailure>;

/// First well-formed {"tool": ..., "params": {...}} block, or a STOP line,
/// whichever comes first. Never throws.
[[nodiscard]] ParsedReply parse_tool_call(std::string_view reply);

struct ToolDefaults {
  double sigma1 = raster::kDefaultSigma1;
  double heavy_sigma = raster::kDefaultHeavySigma;
};

/// Validates `params` against the tool's schema and runs the raster op.
/// Throws InvalidArgument on a schema violation and OutOfBounds from the op.
[[nodiscard]] raster::Raster apply_tool(taxonomy::Tool tool, const nlohmann::json& params,
                                        const raster::Raster& img,
                                        const ToolDefaults& defaults = {});

/// Prompt description of one tool's parameters (versioned asset text).
[[nodiscard]] std::string tool_schema_text(taxonomy::Tool tool, const ToolDefaults& defaults);

struct EvidenceItem {
  ToolCall call;
  taxonomy::Tool tool;
  raster::Raster output;
  int step = 0;
};

enum class StepOutcome { kExecuted, kRejected, kParseFailure, kStop };

[[nodiscard]] std::string_view to_string(StepOutcome o);

struct TranscriptEntry {
  int step = 0;
  std::string reply;
  StepOutcome outcome = StepOutcome::kParseFailure;
  std::string tool;                 // empty unless a call was parsed
  nlohmann::json params;            // null unless a call was parsed
  std::string feedback;             // message sent back to the model, if any
};

using AgentTranscript = std::vector<TranscriptEntry>;

struct AgentResult {
  std::vector<EvidenceItem> evidence;
  AgentTranscript transcript;
};

inline constexpr int kDefaultMaxIters = 3;

/// The tool-manager loop: each iteration is one gateway call. Rejected and
/// unparseable replies consume an iteration and are answered with a JSON error.
[[nodiscard]] AgentResult run_agent(const raster::Raster& img150,
                                    const taxonomy::TaskConfig& config,
                                    std::string_view question, std::string_view choices_text,
                                    gateway::Gateway& gw, int max_iters = kDefaultMaxIters,
                                    const ToolDefaults& defaults = {});

}  // namespace ddp::agent
