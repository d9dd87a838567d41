#include <fstream>
#include <set>
#include <sstream>

#include "ddp/errors.hpp"
#include "ddp/pipeline.hpp"

namespace ddp::pipeline {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (known.count(key) == 0) throw ConfigError("unknown config key '" + where + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + where + key + "' has the wrong type");
  }
}

const char* dialect_name(gateway::Dialect d) {
  return d == gateway::Dialect::kGeminiGenerate ? "gemini_generate" : "openai_chat";
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(sigma1 >= 0.0)) throw ConfigError("sigma1 must be >= 0");
  if (r_low < 1 || r_mid < 1) throw ConfigError("r_low and r_mid must be >= 1");
  if (r_low > r_mid) throw ConfigError("r_low must not exceed r_mid");
  if (!(heavy_sigma > sigma1)) throw ConfigError("heavy_sigma must exceed sigma1");
  if (max_tool_iters < 0) throw ConfigError("max_tool_iters must be >= 0");
  if (concurrency < 1) throw ConfigError("concurrency must be >= 1");
  if (gateway.max_attempts < 1) throw ConfigError("gateway.max_attempts must be >= 1");
  if (gateway.limits.max_in_flight < 1 || gateway.limits.per_minute < 1) {
    throw ConfigError("gateway rate limits must be >= 1");
  }
  if (!(gateway.timeout_s > 0.0)) throw ConfigError("gateway.timeout_s must be > 0");
  if (!(gateway.backoff_base_s >= 0.0) || !(gateway.backoff_factor >= 1.0)) {
    throw ConfigError("gateway backoff must have base >= 0 and factor >= 1");
  }
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  PipelineConfig c;
  reject_unknown(j,
                 {"sigma1", "r_mid", "r_low", "heavy_sigma", "max_tool_iters", "toggles",
                  "gateway", "concurrency"},
                 "");
  read(j, "sigma1", c.sigma1, "");
  read(j, "r_mid", c.r_mid, "");
  read(j, "r_low", c.r_low, "");
  read(j, "heavy_sigma", c.heavy_sigma, "");
  read(j, "max_tool_iters", c.max_tool_iters, "");
  read(j, "concurrency", c.concurrency, "");
  if (j.contains("toggles")) {
    const json& t = j["toggles"];
    reject_unknown(t, {"tools", "prompts", "degradation"}, "toggles.");
    read(t, "tools", c.toggles.tools, "toggles.");
    read(t, "prompts", c.toggles.prompts, "toggles.");
    read(t, "degradation", c.toggles.degradation, "toggles.");
  }
  if (j.contains("gateway")) {
    const json& g = j["gateway"];
    const std::string w = "gateway.";
    reject_unknown(g,
                   {"endpoint", "dialect", "model", "timeout_s", "max_attempts", "backoff_base_s",
                    "backoff_factor", "max_in_flight", "requests_per_minute", "key_cooldown_s",
                    "trace_path"},
                   w);
    auto& gw = c.gateway;
    read(g, "endpoint", gw.endpoint, w);
    read(g, "model", gw.model, w);
    read(g, "timeout_s", gw.timeout_s, w);
    read(g, "max_attempts", gw.max_attempts, w);
    read(g, "backoff_base_s", gw.backoff_base_s, w);
    read(g, "backoff_factor", gw.backoff_factor, w);
    read(g, "max_in_flight", gw.limits.max_in_flight, w);
    read(g, "requests_per_minute", gw.limits.per_minute, w);
    read(g, "key_cooldown_s", gw.key_cooldown_s, w);
    read(g, "trace_path", gw.trace_path, w);
    if (g.contains("dialect")) {
      std::string d;
      read(g, "dialect", d, w);
      if (d == "openai_chat") {
        gw.dialect = gateway::Dialect::kOpenAiChat;
      } else if (d == "gemini_generate") {
        gw.dialect = gateway::Dialect::kGeminiGenerate;
      } else {
        throw ConfigError("gateway.dialect must be 'openai_chat' or 'gemini_generate'");
      }
    }
  }
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const json j = json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file " + path + " is not valid JSON");
  return from_json(j);
}

json PipelineConfig::to_json() const {
  return {{"sigma1", sigma1},
          {"r_mid", r_mid},
          {"r_low", r_low},
          {"heavy_sigma", heavy_sigma},
          {"max_tool_iters", max_tool_iters},
          {"toggles",
           {{"tools", toggles.tools},
            {"prompts", toggles.prompts},
            {"degradation", toggles.degradation}}},
          {"gateway",
           {{"endpoint", gateway.endpoint},
            {"dialect", dialect_name(gateway.dialect)},
            {"model", gateway.model},
            {"timeout_s", gateway.timeout_s},
            {"max_attempts", gateway.max_attempts},
            {"backoff_base_s", gateway.backoff_base_s},
            {"backoff_factor", gateway.backoff_factor},
            {"max_in_flight", gateway.limits.max_in_flight},
            {"requests_per_minute", gateway.limits.per_minute},
            {"key_cooldown_s", gateway.key_cooldown_s},
            {"trace_path", gateway.trace_path}}},
          {"concurrency", concurrency}};
}

std::string PipelineConfig::digest() const {
  // Excludes concurrency and trace_path.
  json j = to_json();
  j.erase("concurrency");
  j["gateway"].erase("trace_path");
  return gateway::sha256_hex(j.dump()).substr(0, 16);
}

}  // namespace ddp::pipeline
