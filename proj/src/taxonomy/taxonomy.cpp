#include "ddp/taxonomy.hpp"

#include <json.hpp>

#include <cctype>

#include "ddp/errors.hpp"

namespace ddp::taxonomy {

namespace {

struct Named {
  std::string_view key;
  Subtask subtask;
};

constexpr Named kSubtaskKeys[] = {
    {"size", Subtask::kSize},
    {"length", Subtask::kLength},
    {"color", Subtask::kColor},
    {"counting", Subtask::kCounting},
    {"find_difference", Subtask::kFindDifference},
    {"color_blind", Subtask::kColorBlind},
    {"motion", Subtask::kMotion},
    {"geometry", Subtask::kGeometry},
    {"real_picture", Subtask::kRealPicture},
    {"others", Subtask::kOthers},
};

constexpr std::string_view kToolNames[] = {"crop",   "white_mask", "cartesian_auxline",
                                           "polar_auxline", "red_box", "blur_mask",
                                           "enhance_contrast"};

std::optional<Category> category_from_token(std::string_view raw) {
  const std::string t = normalize_token(raw);
  if (t == "physicalattributes" || t == "physicalattribute" || t == "physical") {
    return Category::kPhysicalAttributes;
  }
  if (t == "perceptualphenomena" || t == "perceptualphenomenon" || t == "perceptual") {
    return Category::kPerceptualPhenomena;
  }
  return std::nullopt;
}

std::optional<Subtask> subtask_from_token(std::string_view raw) {
  const std::string t = normalize_token(raw);
  for (const Named& n : kSubtaskKeys) {
    if (normalize_token(n.key) == t) return n.subtask;
  }
  // Common variants models produce.
  if (t == "other") return Subtask::kOthers;
  if (t == "colour") return Subtask::kColor;
  if (t == "colourblind" || t == "colorblindness") return Subtask::kColorBlind;
  if (t == "differencelocating" || t == "finddifferences" || t == "spotthedifference") {
    return Subtask::kFindDifference;
  }
  if (t == "count") return Subtask::kCounting;
  if (t == "realphoto" || t == "realpictures") return Subtask::kRealPicture;
  return std::nullopt;
}

bool belongs(Category c, Subtask s) {
  for (Subtask x : subtasks_of(c)) {
    if (x == s) return true;
  }
  return false;
}

std::optional<TaskConfig> make(std::optional<Category> c, std::optional<Subtask> s) {
  if (!c || !s || !belongs(*c, *s)) return std::nullopt;
  return TaskConfig(*c, *s);
}

}  // namespace

std::string_view tool_name(Tool t) { return kToolNames[static_cast<int>(t)]; }

std::optional<Tool> tool_from_name(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kToolNames); ++i) {
    if (kToolNames[i] == name) return static_cast<Tool>(i);
  }
  return std::nullopt;
}

std::string_view category_key(Category c) {
  return c == Category::kPhysicalAttributes ? "physical_attributes" : "perceptual_phenomena";
}

std::string_view subtask_key(Subtask s) {
  for (const Named& n : kSubtaskKeys) {
    if (n.subtask == s) return n.key;
  }
  return "others";
}

const std::vector<Subtask>& subtasks_of(Category c) {
  static const std::vector<Subtask> physical = {Subtask::kSize, Subtask::kLength, Subtask::kColor,
                                                Subtask::kOthers};
  static const std::vector<Subtask> perceptual = {
      Subtask::kCounting, Subtask::kFindDifference, Subtask::kColorBlind, Subtask::kMotion,
      Subtask::kGeometry, Subtask::kRealPicture,    Subtask::kSize,       Subtask::kOthers};
  return c == Category::kPhysicalAttributes ? physical : perceptual;
}

TaskConfig::TaskConfig(Category category, Subtask subtask)
    : category_(category), subtask_(subtask) {
  if (!belongs(category, subtask)) {
    throw InvalidArgument("subtask '" + std::string(subtask_key(subtask)) +
                          "' is not part of category '" + std::string(category_key(category)) +
                          "'");
  }
}

std::string TaskConfig::class_id() const {
  return std::string(category_key(category_)) + "/" + std::string(subtask_key(subtask_));
}

std::optional<TaskConfig> TaskConfig::parse_class_id(std::string_view id) {
  const auto slash = id.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  const std::string_view cat = id.substr(0, slash);
  const std::string_view sub = id.substr(slash + 1);
  for (Category c : {Category::kPhysicalAttributes, Category::kPerceptualPhenomena}) {
    if (category_key(c) != cat) continue;
    for (Subtask s : subtasks_of(c)) {
      if (subtask_key(s) == sub) return TaskConfig(c, s);
    }
  }
  return std::nullopt;
}

std::vector<TaskConfig> TaskConfig::all() {
  std::vector<TaskConfig> out;
  for (Category c : {Category::kPhysicalAttributes, Category::kPerceptualPhenomena}) {
    for (Subtask s : subtasks_of(c)) out.emplace_back(c, s);
  }
  return out;
}

TaskConfig fallback_config() {
  return TaskConfig(Category::kPerceptualPhenomena, Subtask::kOthers);
}

const std::set<Tool>& allowed_tools(Category c) {
  static const std::set<Tool> physical = {Tool::kCrop, Tool::kWhiteMask, Tool::kCartesianAuxline,
                                          Tool::kRedBox};
  static const std::set<Tool> perceptual(kAllTools.begin(), kAllTools.end());
  return c == Category::kPhysicalAttributes ? physical : perceptual;
}

std::string normalize_token(std::string_view s) {
  std::string out;
  for (char ch : s) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isalnum(u) != 0) out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

std::optional<TaskConfig> parse_classification(std::string_view reply) {
  using nlohmann::json;
  // 1) The first JSON object that parses and names both keys.
  for (std::size_t open = reply.find('{'); open != std::string_view::npos;
       open = reply.find('{', open + 1)) {
    for (std::size_t close = reply.find('}', open); close != std::string_view::npos;
         close = reply.find('}', close + 1)) {
      const json j = json::parse(reply.substr(open, close - open + 1), nullptr, false);
      if (j.is_discarded() || !j.is_object()) continue;
      if (j.contains("category") && j["category"].is_string() && j.contains("subtask") &&
          j["subtask"].is_string()) {
        return make(category_from_token(j["category"].get<std::string>()),
                    subtask_from_token(j["subtask"].get<std::string>()));
      }
      break;
    }
  }
  // 2) "category: X" and "subtask: Y" on their own lines.
  std::optional<Category> cat;
  std::optional<Subtask> sub;
  std::size_t start = 0;
  while (start <= reply.size()) {
    const std::size_t end = std::min(reply.find('\n', start), reply.size());
    const std::string_view line = reply.substr(start, end - start);
    const auto colon = line.find_first_of(":=");
    if (colon != std::string_view::npos) {
      const std::string key = normalize_token(line.substr(0, colon));
      const std::string_view value = line.substr(colon + 1);
      if (key == "category" && !cat) cat = category_from_token(value);
      if ((key == "subtask" || key == "subcategory") && !sub) sub = subtask_from_token(value);
    }
    start = end + 1;
  }
  return make(cat, sub);
}

}  // namespace ddp::taxonomy
