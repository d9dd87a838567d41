#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ddp/errors.hpp"
#include "ddp/gateway.hpp"

namespace ddp::gateway {

using nlohmann::json;

namespace {

json openai_message(const ChatMessage& m) {
  json content = json::array();
  for (const ChatPart& p : m.parts) {
    if (p.is_text()) {
      content.push_back({{"type", "text"}, {"text", p.text_value()}});
    } else {
      const std::string url =
          std::string("data:") + ChatPart::media_type() + ";base64," + base64_encode(p.png());
      content.push_back({{"type", "image_url"}, {"image_url", {{"url", url}}}});
    }
  }
  // System messages go out as plain strings; some providers reject part arrays there.
  if (m.role == Role::kSystem) {
    std::string text;
    for (const ChatPart& p : m.parts) {
      if (p.is_text()) text += p.text_value();
    }
    return {{"role", "system"}, {"content", text}};
  }
  const char* role = m.role == Role::kTool ? "user" : to_string(m.role);
  return {{"role", role}, {"content", content}};
}

json gemini_parts(const ChatMessage& m) {
  json parts = json::array();
  for (const ChatPart& p : m.parts) {
    if (p.is_text()) {
      parts.push_back({{"text", p.text_value()}});
    } else {
      parts.push_back(
          {{"inline_data", {{"mime_type", ChatPart::media_type()}, {"data", base64_encode(p.png())}}}});
    }
  }
  return parts;
}

std::string request_url(const GatewayConfig& cfg) {
  if (cfg.dialect == Dialect::kGeminiGenerate) {
    return cfg.endpoint + "/models/" + cfg.model + ":generateContent";
  }
  return cfg.endpoint;
}

}  // namespace

std::string serialize_request(const ChatRequest& req, const GatewayConfig& cfg) {
  if (cfg.dialect == Dialect::kOpenAiChat) {
    json messages = json::array();
    for (const ChatMessage& m : req.messages) messages.push_back(openai_message(m));
    json body = {{"model", cfg.model},
                 {"messages", messages},
                 {"temperature", req.temperature},
                 {"top_p", req.top_p},
                 {"max_tokens", req.max_output}};
    return body.dump();
  }
  json contents = json::array();
  json system_parts = json::array();
  for (const ChatMessage& m : req.messages) {
    if (m.role == Role::kSystem) {
      for (auto& p : gemini_parts(m)) system_parts.push_back(p);
      continue;
    }
    contents.push_back({{"role", m.role == Role::kAssistant ? "model" : "user"},
                        {"parts", gemini_parts(m)}});
  }
  json body = {{"contents", contents},
               {"generationConfig",
                {{"temperature", req.temperature},
                 {"topP", req.top_p},
                 {"maxOutputTokens", req.max_output}}}};
  if (!system_parts.empty()) body["systemInstruction"] = {{"parts", system_parts}};
  return body.dump();
}

std::optional<std::string> parse_reply(const std::string& body, Dialect dialect) {
  const json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  if (dialect == Dialect::kOpenAiChat) {
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
      return std::nullopt;
    }
    const json& msg = j["choices"][0].value("message", json::object());
    if (!msg.contains("content")) return std::nullopt;
    const json& content = msg["content"];
    if (content.is_string()) return content.get<std::string>();
    if (content.is_array()) {
      for (const json& part : content) {
        if (part.is_object() && part.value("type", "") == "text" && part.contains("text") &&
            part["text"].is_string()) {
          return part["text"].get<std::string>();
        }
      }
    }
    return std::nullopt;
  }
  if (!j.contains("candidates") || !j["candidates"].is_array() || j["candidates"].empty()) {
    return std::nullopt;
  }
  const json& cand = j["candidates"][0];
  if (!cand.contains("content") || !cand["content"].contains("parts")) return std::nullopt;
  for (const json& part : cand["content"]["parts"]) {
    if (part.is_object() && part.contains("text") && part["text"].is_string() &&
        !part.value("thought", false)) {
      return part["text"].get<std::string>();
    }
  }
  return std::nullopt;
}

std::vector<std::string> parse_keys(const std::string& csv) {
  std::vector<std::string> keys;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = std::min(csv.find(',', start), csv.size());
    std::string k = csv.substr(start, comma - start);
    const auto b = k.find_first_not_of(" \t\r\n");
    const auto e = k.find_last_not_of(" \t\r\n");
    if (b != std::string::npos) keys.push_back(k.substr(b, e - b + 1));
    start = comma + 1;
  }
  return keys;
}

std::string trace_to_json_line(const BackendTrace& t) {
  return json{{"request_digest", t.request_digest},
              {"key_index", t.key_index},
              {"attempts", t.attempts},
              {"latency_ms", t.latency_ms},
              {"reply", t.reply}}
      .dump();
}

LiveGateway::LiveGateway(GatewayConfig config, std::vector<std::string> keys,
                         std::unique_ptr<HttpTransport> transport, Clock& clock)
    : config_(std::move(config)),
      keys_(std::move(keys)),
      transport_(std::move(transport)),
      clock_(clock),
      limiter_(config_.limits, clock) {
  if (keys_.empty()) throw ConfigError("live gateway needs at least one API key (DDP_API_KEYS)");
  if (config_.max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
  cooldown_until_.assign(keys_.size(), TimePoint::min());
}

int LiveGateway::next_key() {
  std::unique_lock lock(mu_);
  for (;;) {
    const TimePoint now = clock_.now();
    const std::size_t n = keys_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = (cursor_ + i) % n;
      if (cooldown_until_[k] <= now) {
        cursor_ = k + 1;
        key_history_.push_back(static_cast<int>(k));
        return static_cast<int>(k);
      }
    }
    const TimePoint wake = *std::min_element(cooldown_until_.begin(), cooldown_until_.end());
    lock.unlock();
    clock_.sleep_until(wake);
    lock.lock();
  }
}

void LiveGateway::cool_down(int key) {
  std::lock_guard lock(mu_);
  cooldown_until_[static_cast<std::size_t>(key)] =
      clock_.now() + std::chrono::duration_cast<Duration>(
                         std::chrono::duration<double>(config_.key_cooldown_s));
}

void LiveGateway::append_trace(BackendTrace t) {
  std::lock_guard lock(mu_);
  if (!config_.trace_path.empty()) {
    std::ofstream out(config_.trace_path, std::ios::app);
    out << trace_to_json_line(t) << '\n';
  }
  traces_.push_back(std::move(t));
}

Reply LiveGateway::send(const ChatRequest& request) {
  request.validate();
  const std::string body = serialize_request(request, config_);
  const std::string url = request_url(config_);
  const TimePoint start = clock_.now();
  std::string last_error = "no attempt made";

  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    const int key = next_key();
    std::vector<std::pair<std::string, std::string>> headers;
    if (config_.dialect == Dialect::kGeminiGenerate) {
      headers.emplace_back("x-goog-api-key", keys_[static_cast<std::size_t>(key)]);
    } else {
      headers.emplace_back("Authorization", "Bearer " + keys_[static_cast<std::size_t>(key)]);
    }

    HttpResponse resp;
    {
      auto permit = limiter_.acquire();
      resp = transport_->post(url, headers, body, config_.timeout_s);
    }

    if (resp.status == 200) {
      if (auto text = parse_reply(resp.body, config_.dialect)) {
        append_trace({payload_digest(request), key, attempt, to_ms(clock_.now() - start), *text});
        return {*text, attempt};
      }
      last_error = "reply had no text segment";
    } else if (resp.status == 401 || resp.status == 403) {
      throw AuthFailure("HTTP " + std::to_string(resp.status) + " with key #" +
                        std::to_string(key));
    } else if (resp.status == 429) {
      cool_down(key);
      last_error = "HTTP 429";
    } else if (resp.timed_out || resp.status == 0) {
      last_error = "timeout or connection failure";
    } else if (resp.status >= 500) {
      last_error = "HTTP " + std::to_string(resp.status);
    } else {
      throw GatewayError("HTTP " + std::to_string(resp.status) + ": " + resp.body.substr(0, 500));
    }

    if (attempt < config_.max_attempts) {
      const double backoff =
          config_.backoff_base_s * std::pow(config_.backoff_factor, attempt - 1);
      clock_.sleep_for(std::chrono::duration_cast<Duration>(std::chrono::duration<double>(backoff)));
    }
  }
  throw ExhaustedRetries("all " + std::to_string(config_.max_attempts) +
                         " attempts failed; last: " + last_error);
}

std::vector<BackendTrace> LiveGateway::traces() const {
  std::lock_guard lock(mu_);
  return traces_;
}

std::vector<int> LiveGateway::key_history() const {
  std::lock_guard lock(mu_);
  return key_history_;
}

}  // namespace ddp::gateway
