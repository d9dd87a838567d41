#include <cctype>
#include <optional>

#include "ddp/agent.hpp"

namespace ddp::agent {

namespace {

using nlohmann::json;

/// End (exclusive) of the brace-balanced span starting at `open`, honouring
/// JSON string literals; npos if unbalanced.
std::size_t balanced_end(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

struct Found {
  std::size_t pos;
  ToolCall call;
};

std::optional<Found> first_call_block(std::string_view reply) {
  for (std::size_t open = reply.find('{'); open != std::string_view::npos;
       open = reply.find('{', open + 1)) {
    const std::size_t end = balanced_end(reply, open);
    if (end == std::string_view::npos) continue;
    const json j = json::parse(reply.substr(open, end - open), nullptr, false);
    if (j.is_discarded() || !j.is_object()) continue;
    if (!j.contains("tool") || !j["tool"].is_string()) continue;
    ToolCall call;
    call.tool = j["tool"].get<std::string>();
    if (j.contains("params")) {
      if (!j["params"].is_object()) continue;
      call.params = j["params"];
    }
    if (j.contains("note") && j["note"].is_string()) call.note = j["note"].get<std::string>();
    return Found{open, std::move(call)};
  }
  return std::nullopt;
}

std::optional<std::size_t> first_stop_line(std::string_view reply) {
  std::size_t start = 0;
  while (start <= reply.size()) {
    const std::size_t end = std::min(reply.find('\n', start), reply.size());
    std::string token;
    for (char c : reply.substr(start, end - start)) {
      // Tolerate markdown emphasis, code ticks and a trailing period.
      if (c == '*' || c == '`' || c == '.' || std::isspace(static_cast<unsigned char>(c))) continue;
      token.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    if (token == "STOP") return start;
    start = end + 1;
  }
  return std::nullopt;
}

}  // namespace

ParsedReply parse_tool_call(std::string_view reply) {
  auto call = first_call_block(reply);
  auto stop = first_stop_line(reply);
  if (call && (!stop || call->pos < *stop)) return std::move(call->call);
  if (stop) return Stop{};
  return ParseFailure{"no tool call block or STOP token found"};
}

}  // namespace ddp::agent
