#include <filesystem>
#include <fstream>
#include <sstream>

#include "ddp/critic.hpp"
#include "ddp/errors.hpp"
#include "ddp/prompts.hpp"

namespace ddp::critic {

namespace {

std::string asset_stem(const taxonomy::TaskConfig& c) {
  return "align__" + std::string(taxonomy::category_key(c.category())) + "__" +
         std::string(taxonomy::subtask_key(c.subtask()));
}

}  // namespace

std::string format_choices(const Choices& choices) {
  std::string out;
  for (const auto& [letter, text] : choices) {
    if (!out.empty()) out += '\n';
    out += letter;
    out += ". ";
    out += text;
  }
  return out;
}

std::string format_letters(const Choices& choices) {
  std::string out;
  for (const auto& [letter, text] : choices) {
    if (!out.empty()) out += ", ";
    out += letter;
  }
  return out;
}

PromptLibrary PromptLibrary::builtin() {
  PromptLibrary lib;
  lib.generic_ = assets::prompt("align_generic");
  for (const taxonomy::TaskConfig& c : taxonomy::TaskConfig::all()) {
    lib.by_class_[c.class_id()] = assets::prompt(asset_stem(c));
  }
  return lib;
}

PromptLibrary PromptLibrary::load_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("prompt directory not found: " + dir);
  PromptLibrary lib = builtin();
  auto read = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  if (fs::exists(fs::path(dir) / "align_generic.txt")) {
    lib.generic_ = read(fs::path(dir) / "align_generic.txt");
  }
  for (const taxonomy::TaskConfig& c : taxonomy::TaskConfig::all()) {
    const fs::path p = fs::path(dir) / (asset_stem(c) + ".txt");
    if (fs::exists(p)) lib.by_class_[c.class_id()] = read(p);
  }
  return lib;
}

const std::string& PromptLibrary::for_class(const std::string& class_id) const {
  auto it = by_class_.find(class_id);
  return it == by_class_.end() ? generic_ : it->second;
}

}  // namespace ddp::critic
