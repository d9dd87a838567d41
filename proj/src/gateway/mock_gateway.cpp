#include <json.hpp>

#include <fstream>
#include <sstream>

#include "ddp/errors.hpp"
#include "ddp/gateway.hpp"

namespace ddp::gateway {

using nlohmann::json;

MockScript MockScript::from_json_text(const std::string& text) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("mock script is not valid JSON");
  MockScript s;
  // A bare array is shorthand for a sequence script.
  if (j.is_array()) {
    s.sequence = j.get<std::vector<std::string>>();
    return s;
  }
  if (!j.is_object()) throw ConfigError("mock script must be a JSON object or array");
  const std::string mode = j.value("mode", "sequence");
  try {
    if (mode == "sequence") {
      s.mode = Mode::kSequence;
      s.sequence = j.at("replies").get<std::vector<std::string>>();
    } else if (mode == "digest") {
      s.mode = Mode::kDigest;
      s.by_digest = j.at("replies").get<std::map<std::string, std::string>>();
      s.strict = j.value("strict", true);
      s.fallback_reply = j.value("fallback", "");
    } else if (mode == "rules") {
      s.mode = Mode::kRules;
      for (const json& r : j.at("rules")) {
        Rule rule;
        const json& c = r.at("contains");
        if (c.is_string()) {
          rule.contains.push_back(c.get<std::string>());
        } else {
          rule.contains = c.get<std::vector<std::string>>();
        }
        rule.replies = r.at("replies").get<std::vector<std::string>>();
        s.rules.push_back(std::move(rule));
      }
      s.strict = j.value("strict", true);
      s.fallback_reply = j.value("fallback", "");
    } else {
      throw ConfigError("unknown mock script mode '" + mode + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed mock script: ") + e.what());
  }
  return s;
}

MockScript MockScript::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read mock script " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

MockGateway::MockGateway(MockScript script, MockOptions options)
    : script_(std::move(script)),
      options_(options),
      clock_(options.clock != nullptr ? *options.clock : steady_clock()) {
  if (options_.limits) limiter_ = std::make_unique<RateLimiter>(*options_.limits, clock_);
  rule_cursor_.assign(script_.rules.size(), 0);
}

namespace {

std::string request_text(const ChatRequest& req) {
  std::string all;
  for (const ChatMessage& m : req.messages) {
    for (const ChatPart& p : m.parts) {
      if (p.is_text()) {
        all += p.text_value();
        all += '\n';
      }
    }
  }
  return all;
}

}  // namespace

std::string MockGateway::next_reply(const ChatRequest& request) {
  switch (script_.mode) {
    case MockScript::Mode::kSequence:
      if (seq_cursor_ >= script_.sequence.size()) {
        throw ScriptExhausted("mock script exhausted after " +
                              std::to_string(script_.sequence.size()) + " replies");
      }
      return script_.sequence[seq_cursor_++];
    case MockScript::Mode::kDigest: {
      const std::string d = stable_digest(request);
      if (auto it = script_.by_digest.find(d); it != script_.by_digest.end()) return it->second;
      if (script_.strict) throw UnmatchedDigest("no scripted reply for digest " + d);
      return script_.fallback_reply;
    }
    case MockScript::Mode::kRules: {
      const std::string text = request_text(request);
      for (std::size_t i = 0; i < script_.rules.size(); ++i) {
        const auto& rule = script_.rules[i];
        bool match = true;
        for (const std::string& needle : rule.contains) {
          if (text.find(needle) == std::string::npos) {
            match = false;
            break;
          }
        }
        if (!match) continue;
        if (rule_cursor_[i] >= rule.replies.size()) {
          throw ScriptExhausted("mock rule #" + std::to_string(i) + " exhausted");
        }
        return rule.replies[rule_cursor_[i]++];
      }
      if (script_.strict) throw UnmatchedDigest("no mock rule matches request");
      return script_.fallback_reply;
    }
  }
  throw ScriptExhausted("unreachable mock mode");
}

Reply MockGateway::send(const ChatRequest& request) {
  request.validate();
  const TimePoint start = clock_.now();
  std::optional<RateLimiter::Permit> permit;
  if (limiter_) permit.emplace(limiter_->acquire());
  if (options_.latency > Duration::zero()) clock_.sleep_for(options_.latency);

  std::lock_guard lock(mu_);
  recorded_.push_back(request);
  std::string reply = next_reply(request);
  traces_.push_back({payload_digest(request), -1, 1, to_ms(clock_.now() - start), reply});
  return {std::move(reply), 1};
}

std::vector<BackendTrace> MockGateway::traces() const {
  std::lock_guard lock(mu_);
  return traces_;
}

std::vector<ChatRequest> MockGateway::recorded() const {
  std::lock_guard lock(mu_);
  return recorded_;
}

std::size_t MockGateway::call_count() const {
  std::lock_guard lock(mu_);
  return recorded_.size();
}

Reply CountingGateway::send(const ChatRequest& request) {
  ++calls_;
  Reply r = inner_.send(request);
  attempts_ += r.attempts;
  return r;
}

void write_request_log(const std::vector<ChatRequest>& requests, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write request log " + path);
  for (const ChatRequest& req : requests) {
    json messages = json::array();
    for (const ChatMessage& m : req.messages) {
      json parts = json::array();
      for (const ChatPart& p : m.parts) {
        if (p.is_text()) {
          parts.push_back({{"type", "text"}, {"text", p.text_value()}});
        } else {
          parts.push_back({{"type", "image"},
                           {"width", p.image_width()},
                           {"height", p.image_height()},
                           {"sha256", sha256_hex(std::string(p.png().begin(), p.png().end()))}});
        }
      }
      messages.push_back({{"role", to_string(m.role)}, {"parts", parts}});
    }
    out << json{{"digest", payload_digest(req)}, {"messages", messages}}.dump() << '\n';
  }
}

}  // namespace ddp::gateway
