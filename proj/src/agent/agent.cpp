#include "ddp/agent.hpp"

#include "ddp/errors.hpp"
#include "ddp/prompts.hpp"

namespace ddp::agent {

using gateway::ChatPart;
using gateway::Role;
using nlohmann::json;

std::string_view to_string(StepOutcome o) {
  switch (o) {
    case StepOutcome::kExecuted: return "executed";
    case StepOutcome::kRejected: return "rejected";
    case StepOutcome::kParseFailure: return "parse_failure";
    case StepOutcome::kStop: return "stop";
  }
  return "parse_failure";
}

namespace {

std::string error_feedback(std::string_view code, std::string_view message,
                           const std::string& tool = {}) {
  json j = {{"error", code}, {"message", message}};
  if (!tool.empty()) j["tool"] = tool;
  return j.dump();
}

}  // namespace

AgentResult run_agent(const raster::Raster& img150, const taxonomy::TaskConfig& config,
                      std::string_view question, std::string_view choices_text,
                      gateway::Gateway& gw, int max_iters, const ToolDefaults& defaults) {
  if (max_iters < 0) throw InvalidArgument("max_iters must be >= 0");
  const auto& allowed = taxonomy::allowed_tools(config);

  std::string tool_list;
  for (taxonomy::Tool t : taxonomy::kAllTools) {
    if (allowed.count(t) != 0) tool_list += "- " + tool_schema_text(t, defaults) + "\n";
  }
  gateway::ChatRequest req;
  req.add_text(Role::kSystem,
               assets::render(assets::prompt("agent_system"),
                              {{"class_id", config.class_id()},
                               {"width", std::to_string(img150.width())},
                               {"height", std::to_string(img150.height())},
                               {"tools", tool_list},
                               {"max_iters", std::to_string(max_iters)}}));
  req.add(Role::kUser, {ChatPart::text(assets::render(assets::prompt("agent_user"),
                                                      {{"question", std::string(question)},
                                                       {"choices", std::string(choices_text)}})),
                        ChatPart::image(img150)});

  AgentResult result;
  for (int step = 0; step < max_iters; ++step) {
    const gateway::Reply reply = gw.send(req);
    req.add_text(Role::kAssistant, reply.text);

    TranscriptEntry entry;
    entry.step = step;
    entry.reply = reply.text;
    ParsedReply parsed = parse_tool_call(reply.text);

    if (std::holds_alternative<Stop>(parsed)) {
      entry.outcome = StepOutcome::kStop;
      result.transcript.push_back(std::move(entry));
      break;
    }
    if (const auto* failure = std::get_if<ParseFailure>(&parsed)) {
      entry.outcome = StepOutcome::kParseFailure;
      entry.feedback = error_feedback("parse_failure", failure->reason);
      req.add_text(Role::kUser, entry.feedback);
      result.transcript.push_back(std::move(entry));
      continue;
    }

    ToolCall call = std::get<ToolCall>(std::move(parsed));
    entry.tool = call.tool;
    entry.params = call.params;
    const auto tool = taxonomy::tool_from_name(call.tool);
    if (!tool) {
      entry.outcome = StepOutcome::kRejected;
      entry.feedback = error_feedback("unknown_tool", "no tool named '" + call.tool + "'", call.tool);
    } else if (allowed.count(*tool) == 0) {
      entry.outcome = StepOutcome::kRejected;
      entry.feedback = error_feedback(
          "tool_not_permitted", "tool not permitted for this category (" + config.class_id() + ")",
          call.tool);
    } else {
      try {
        raster::Raster output = apply_tool(*tool, call.params, img150, defaults);
        entry.outcome = StepOutcome::kExecuted;
        entry.feedback = json{{"ok", true},
                              {"tool", call.tool},
                              {"width", output.width()},
                              {"height", output.height()}}
                             .dump();
        req.add(Role::kUser, {ChatPart::text(entry.feedback), ChatPart::image(output)});
        result.evidence.push_back({std::move(call), *tool, std::move(output), step});
        result.transcript.push_back(std::move(entry));
        continue;
      } catch (const OutOfBounds& e) {
        entry.outcome = StepOutcome::kRejected;
        entry.feedback = error_feedback("out_of_bounds", e.what(), entry.tool);
      } catch (const InvalidArgument& e) {
        entry.outcome = StepOutcome::kRejected;
        entry.feedback = error_feedback("invalid_params", e.what(), entry.tool);
      } catch (const DimensionMismatch& e) {
        entry.outcome = StepOutcome::kRejected;
        entry.feedback = error_feedback("invalid_params", e.what(), entry.tool);
      }
    }
    req.add_text(Role::kUser, entry.feedback);
    result.transcript.push_back(std::move(entry));
  }
  return result;
}

}  // namespace ddp::agent
