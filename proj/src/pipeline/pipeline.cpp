#include "ddp/pipeline.hpp"

#include "ddp/errors.hpp"
#include "ddp/raster_ops.hpp"

namespace ddp::pipeline {

using nlohmann::json;

namespace {

json optional_letter(const std::optional<char>& c) {
  return c ? json(std::string(1, *c)) : json(nullptr);
}

std::optional<char> letter_from(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  const auto s = j[key].get<std::string>();
  if (s.size() != 1) throw InvalidArgument(std::string("record field '") + key + "' is not a letter");
  return s[0];
}

agent::StepOutcome outcome_from(const std::string& s) {
  for (auto o : {agent::StepOutcome::kExecuted, agent::StepOutcome::kRejected,
                 agent::StepOutcome::kParseFailure, agent::StepOutcome::kStop}) {
    if (agent::to_string(o) == s) return o;
  }
  throw InvalidArgument("unknown transcript outcome '" + s + "'");
}

}  // namespace

json RunRecord::to_json() const {
  json ev = json::array();
  for (const EvidenceSummary& e : evidence) {
    ev.push_back({{"step", e.step},
                  {"tool", e.tool},
                  {"params", e.params},
                  {"width", e.width},
                  {"height", e.height}});
  }
  json tr = json::array();
  for (const agent::TranscriptEntry& t : transcript) {
    tr.push_back({{"step", t.step},
                  {"reply", t.reply},
                  {"outcome", agent::to_string(t.outcome)},
                  {"tool", t.tool},
                  {"params", t.params},
                  {"feedback", t.feedback}});
  }
  json j = {{"query_id", query_id},
            {"status", status == RecordStatus::kOk ? "ok" : "failed"},
            {"error", error},
            {"class_id", class_id ? json(*class_id) : json(nullptr)},
            {"classifier_fallback", classifier_fallback},
            {"evidence", ev},
            {"transcript", tr},
            {"option", verdict ? optional_letter(verdict->option) : json(nullptr)},
            {"abstained", verdict ? json(verdict->abstained) : json(nullptr)},
            {"cot", verdict ? json(verdict->cot) : json(nullptr)},
            {"confidence_note", verdict ? json(verdict->confidence_note) : json(nullptr)},
            {"answer", optional_letter(answer)},
            {"correct", correct ? json(*correct) : json(nullptr)},
            {"tags", tags},
            {"wall_ms", wall_ms},
            {"gateway_calls", gateway_calls},
            {"gateway_attempts", gateway_attempts},
            {"config_digest", config_digest}};
  return j;
}

RunRecord RunRecord::from_json(const json& j) {
  RunRecord r;
  try {
    r.query_id = j.at("query_id").get<std::string>();
    r.status = j.at("status").get<std::string>() == "ok" ? RecordStatus::kOk : RecordStatus::kFailed;
    r.error = j.value("error", "");
    if (j.contains("class_id") && !j["class_id"].is_null()) {
      r.class_id = j["class_id"].get<std::string>();
    }
    r.classifier_fallback = j.value("classifier_fallback", false);
    for (const json& e : j.value("evidence", json::array())) {
      r.evidence.push_back({e.at("step").get<int>(), e.at("tool").get<std::string>(),
                            e.at("params"), e.at("width").get<int>(), e.at("height").get<int>()});
    }
    for (const json& t : j.value("transcript", json::array())) {
      agent::TranscriptEntry entry;
      entry.step = t.at("step").get<int>();
      entry.reply = t.at("reply").get<std::string>();
      entry.outcome = outcome_from(t.at("outcome").get<std::string>());
      entry.tool = t.value("tool", "");
      entry.params = t.value("params", json());
      entry.feedback = t.value("feedback", "");
      r.transcript.push_back(std::move(entry));
    }
    if (j.contains("abstained") && !j["abstained"].is_null()) {
      critic::Verdict v;
      v.abstained = j["abstained"].get<bool>();
      v.option = letter_from(j, "option");
      v.cot = j.value("cot", "");
      v.confidence_note = j.value("confidence_note", "");
      r.verdict = v;
    }
    r.answer = letter_from(j, "answer");
    if (j.contains("correct") && !j["correct"].is_null()) r.correct = j["correct"].get<bool>();
    r.tags = j.value("tags", std::vector<std::string>{});
    r.wall_ms = j.value("wall_ms", 0.0);
    r.gateway_calls = j.value("gateway_calls", 0);
    r.gateway_attempts = j.value("gateway_attempts", 0);
    r.config_digest = j.value("config_digest", "");
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed run record: ") + e.what());
  }
  return r;
}

RunRecord RunRecord::without_latency() const {
  RunRecord r = *this;
  r.wall_ms = 0.0;
  return r;
}

RunRecord run_query(const Query& query, const PipelineConfig& config, gateway::Gateway& gw,
                    const critic::PromptLibrary& library, Clock& clock) {
  const TimePoint start = clock.now();
  gateway::CountingGateway counter(gw);

  RunRecord rec;
  rec.query_id = query.id;
  rec.answer = query.answer;
  rec.tags = query.tags;
  rec.config_digest = config.digest();

  try {
    if (query.choices.empty()) throw InvalidArgument("query has no choices");
    const raster::Raster image = query.image_bytes.empty()
                                     ? raster::read_image_file(query.image_path)
                                     : raster::decode_image(query.image_bytes);

    const raster::Raster base = raster::gaussian_smooth(image, config.sigma1);
    const taxonomy::Classification cls = taxonomy::classify(base, query.question, counter);
    rec.class_id = cls.config.class_id();
    rec.classifier_fallback = cls.fell_back;

    const raster::Raster img150 =
        config.toggles.degradation ? raster::downsample_max_dim(base, config.r_mid) : base;

    agent::AgentResult agent_result;
    if (config.toggles.tools) {
      agent_result = agent::run_agent(img150, cls.config, query.question,
                                      critic::format_choices(query.choices), counter,
                                      config.max_tool_iters,
                                      {config.sigma1, config.heavy_sigma});
    }
    for (const agent::EvidenceItem& e : agent_result.evidence) {
      rec.evidence.push_back(
          {e.step, e.call.tool, e.call.params, e.output.width(), e.output.height()});
    }
    rec.transcript = agent_result.transcript;

    const raster::Raster& img_tool =
        agent_result.evidence.empty() ? img150 : agent_result.evidence.back().output;
    critic::JudgeOptions opts;
    opts.r_low = config.r_low;
    opts.degrade = config.toggles.degradation;
    opts.class_prompts = config.toggles.prompts;
    rec.verdict = critic::judge(agent_result.evidence, img_tool, query.question, query.choices,
                                cls.config, library, counter, opts);
    if (query.answer) {
      rec.correct = !rec.verdict->abstained && rec.verdict->option == query.answer;
    }
  } catch (const std::exception& e) {
    rec.status = RecordStatus::kFailed;
    rec.error = e.what();
    rec.verdict.reset();
    if (query.answer) rec.correct = false;
  }

  rec.gateway_calls = counter.calls();
  rec.gateway_attempts = counter.attempts();
  rec.wall_ms = to_ms(clock.now() - start);
  return rec;
}

}  // namespace ddp::pipeline
