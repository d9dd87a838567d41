#include "ddp/critic.hpp"

#include "ddp/errors.hpp"
#include "ddp/prompts.hpp"
#include "ddp/raster_ops.hpp"

namespace ddp::critic {

using gateway::ChatPart;
using gateway::Role;

Verdict judge(const std::vector<agent::EvidenceItem>& evidence, const raster::Raster& img_tool,
              std::string_view question, const Choices& choices,
              const taxonomy::TaskConfig& config, const PromptLibrary& library,
              gateway::Gateway& gw, const JudgeOptions& options) {
  if (choices.empty()) throw InvalidArgument("judge needs at least one choice");
  std::set<char> letters;
  for (const auto& [letter, text] : choices) letters.insert(letter);

  const std::map<std::string, std::string> vars = {
      {"class_id", config.class_id()},
      {"question", std::string(question)},
      {"choices", format_choices(choices)},
      {"letters", format_letters(choices)},
      {"evidence_summary",
       evidence.empty() ? std::string("No tool evidence is available.")
                        : "The remaining " + std::to_string(evidence.size()) +
                              " image(s) are tool outputs, each preceded by its caption."}};

  const std::string& align =
      options.class_prompts ? library.for_class(config.class_id()) : library.generic();

  const raster::Raster base =
      options.degrade ? raster::downsample_max_dim(img_tool, options.r_low) : img_tool;

  std::vector<ChatPart> parts;
  parts.push_back(ChatPart::text(assets::render(assets::prompt("critic_user"), vars)));
  parts.push_back(ChatPart::image(base));
  for (std::size_t i = 0; i < evidence.size(); ++i) {
    const agent::EvidenceItem& e = evidence[i];
    std::string caption = "Evidence " + std::to_string(i + 1) + ": " + e.call.tool + " " +
                          e.call.params.dump();
    if (!e.call.note.empty()) caption += " (" + e.call.note + ")";
    parts.push_back(ChatPart::text(caption));
    parts.push_back(ChatPart::image(e.output));
  }

  gateway::ChatRequest req;
  req.add_text(Role::kSystem, assets::render(align, vars));
  req.add(Role::kUser, std::move(parts));

  Verdict v;
  const gateway::Reply first = gw.send(req);
  v.cot = first.text;
  if (auto option = extract_option(first.text, letters)) {
    v.option = option;
    v.abstained = false;
    return v;
  }

  req.add_text(Role::kAssistant, first.text);
  req.add_text(Role::kUser, assets::render(assets::prompt("critic_reformat"), vars));
  const gateway::Reply second = gw.send(req);
  v.confidence_note = second.text;
  if (auto option = extract_option(second.text, letters)) {
    v.option = option;
    v.abstained = false;
  }
  return v;
}

}  // namespace ddp::critic
