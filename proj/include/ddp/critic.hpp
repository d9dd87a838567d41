#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ddp/agent.hpp"
#include "ddp/gateway.hpp"
#include "ddp/taxonomy.hpp"

namespace ddp::critic {

/// Ordered letter -> option text.
using Choices = std::map<char, std::string>;

[[nodiscard]] std::string format_choices(const Choices& choices);
/// "A, B, C, D"
[[nodiscard]] std::string format_letters(const Choices& choices);

/// Alignment prompts keyed by class_id, plus the generic template used for
/// unknown classes and when class prompts are switched off.
class PromptLibrary {
 public:
  /// The templates compiled from assets/prompts.
  static PromptLibrary builtin();
  /// Builtins overridden by any align__<category>__<subtask>.txt or
  /// align_generic.txt found in `dir`.
  static PromptLibrary load_dir(const std::string& dir);

  [[nodiscard]] const std::string& for_class(const std::string& class_id) const;
  [[nodiscard]] const std::string& generic() const { return generic_; }
  [[nodiscard]] bool has_class(const std::string& class_id) const {
    return by_class_.count(class_id) != 0;
  }

 private:
  std::map<std::string, std::string> by_class_;
  std::string generic_;
};

struct Verdict {
  std::optional<char> option;
  std::string cot;
  std::string confidence_note;
  bool abstained = true;
};

/// Pulls the chosen option out of free text, in priority order:
///   1. the last "Final Answer: X" marker naming a valid letter;
///   2. a last non-empty line consisting of just a letter ("C", "(C)", "**C**");
///   3. the last parenthesized or bold single valid letter anywhere.
/// Returns nullopt when none applies.
[[nodiscard]] std::optional<char> extract_option(std::string_view reply,
                                                 const std::set<char>& valid_letters);

struct JudgeOptions {
  int r_low = 80;
  bool degrade = true;          // apply the r_low bottleneck to img_tool
  bool class_prompts = true;    // false: generic alignment prompt
};

[[nodiscard]] Verdict judge(const std::vector<agent::EvidenceItem>& evidence,
                            const raster::Raster& img_tool, std::string_view question,
                            const Choices& choices, const taxonomy::TaskConfig& config,
                            const PromptLibrary& library, gateway::Gateway& gw,
                            const JudgeOptions& options = {});

}  // namespace ddp::critic
