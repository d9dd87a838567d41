#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ddp/gateway.hpp"
#include "ddp/raster.hpp"

namespace ddp::taxonomy {

enum class Category { kPhysicalAttributes, kPerceptualPhenomena };

enum class Subtask {
  kSize,
  kLength,
  kColor,
  kCounting,
  kFindDifference,
  kColorBlind,
  kMotion,
  kGeometry,
  kRealPicture,
  kOthers,
};

/// The image tools Ω the agent may call.
enum class Tool {
  kCrop,
  kWhiteMask,
  kCartesianAuxline,
  kPolarAuxline,
  kRedBox,
  kBlurMask,
  kEnhanceContrast,
};

inline constexpr std::array<Tool, 7> kAllTools = {
    Tool::kCrop,   Tool::kWhiteMask, Tool::kCartesianAuxline, Tool::kPolarAuxline,
    Tool::kRedBox, Tool::kBlurMask,  Tool::kEnhanceContrast};

[[nodiscard]] std::string_view tool_name(Tool t);
[[nodiscard]] std::optional<Tool> tool_from_name(std::string_view name);

[[nodiscard]] std::string_view category_key(Category c);
[[nodiscard]] std::string_view subtask_key(Subtask s);

/// Subtasks valid under `c`, in listing order.
[[nodiscard]] const std::vector<Subtask>& subtasks_of(Category c);

class TaskConfig {
 public:
  /// Throws InvalidArgument when `subtask` does not belong to `category`.
  TaskConfig(Category category, Subtask subtask);

  [[nodiscard]] Category category() const noexcept { return category_; }
  [[nodiscard]] Subtask subtask() const noexcept { return subtask_; }
  /// "category/subtask", e.g. "perceptual_phenomena/counting".
  [[nodiscard]] std::string class_id() const;
  [[nodiscard]] static std::optional<TaskConfig> parse_class_id(std::string_view id);

  /// Every valid (category, subtask) pair; 12 in total.
  [[nodiscard]] static std::vector<TaskConfig> all();

  friend bool operator==(const TaskConfig&, const TaskConfig&) = default;

 private:
  Category category_;
  Subtask subtask_;
};

/// PerceptualPhenomena/Others: the configuration with the widest tool access.
[[nodiscard]] TaskConfig fallback_config();

[[nodiscard]] const std::set<Tool>& allowed_tools(Category c);
[[nodiscard]] inline const std::set<Tool>& allowed_tools(const TaskConfig& c) {
  return allowed_tools(c.category());
}

/// Lowercase and drop everything but letters and digits: "Find-Difference" -> "finddifference".
[[nodiscard]] std::string normalize_token(std::string_view s);

/// Parses a classifier reply: a JSON object or "category: ... / subtask: ..."
/// lines. Matching is case-insensitive and ignores punctuation.
[[nodiscard]] std::optional<TaskConfig> parse_classification(std::string_view reply);

struct Classification {
  TaskConfig config;
  bool fell_back = false;
  int calls = 0;
  std::vector<std::string> replies;
};

/// Sends the classifier prompt with `base_image`; one reminder retry, then
/// falls back to PerceptualPhenomena/Others. Gateway errors propagate.
[[nodiscard]] Classification classify(const raster::Raster& base_image, std::string_view question,
                                      gateway::Gateway& gw);

}  // namespace ddp::taxonomy
