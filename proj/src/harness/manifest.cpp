#include <filesystem>
#include <fstream>
#include <set>

#include "ddp/errors.hpp"
#include "ddp/harness.hpp"

namespace ddp::harness {

using nlohmann::json;

namespace {

std::vector<std::uint8_t> base64_decode(std::size_t line, const std::string& in) {
  static const std::string kAlphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::vector<std::uint8_t> out;
  unsigned buffer = 0;
  int bits = 0;
  for (char c : in) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    const auto v = kAlphabet.find(c);
    if (v == std::string::npos) throw ManifestParseError(line, "image_base64 is not base64");
    buffer = (buffer << 6) | static_cast<unsigned>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((buffer >> bits) & 0xFF));
    }
  }
  return out;
}

}  // namespace

Query parse_manifest_entry(const json& j, std::size_t line, const std::string& base_dir) {
  if (!j.is_object()) throw ManifestParseError(line, "expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    static const std::set<std::string> known = {"id",      "image",  "image_base64", "question",
                                                "choices", "answer", "tags"};
    if (known.count(key) == 0) throw ManifestParseError(line, "unknown field '" + key + "'");
  }
  Query q;
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
    throw ManifestParseError(line, "'id' must be a non-empty string");
  }
  q.id = j["id"].get<std::string>();

  if (j.contains("image_base64")) {
    if (!j["image_base64"].is_string()) throw ManifestParseError(line, "'image_base64' must be a string");
    q.image_bytes = base64_decode(line, j["image_base64"].get<std::string>());
  } else if (j.contains("image") && j["image"].is_string()) {
    std::filesystem::path p = j["image"].get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    q.image_path = p.lexically_normal().string();
  } else {
    throw ManifestParseError(line, "one of 'image' or 'image_base64' is required");
  }

  if (!j.contains("question") || !j["question"].is_string()) {
    throw ManifestParseError(line, "'question' must be a string");
  }
  q.question = j["question"].get<std::string>();

  if (!j.contains("choices")) throw ManifestParseError(line, "'choices' is required");
  const json& ch = j["choices"];
  if (ch.is_array()) {
    if (ch.size() > 26) throw ManifestParseError(line, "more than 26 choices");
    char letter = 'A';
    for (const json& c : ch) {
      if (!c.is_string()) throw ManifestParseError(line, "choice texts must be strings");
      q.choices[letter++] = c.get<std::string>();
    }
  } else if (ch.is_object()) {
    for (const auto& [key, value] : ch.items()) {
      if (key.size() != 1 || key[0] < 'A' || key[0] > 'Z') {
        throw ManifestParseError(line, "choice key '" + key + "' is not a capital letter");
      }
      if (!value.is_string()) throw ManifestParseError(line, "choice texts must be strings");
      q.choices[key[0]] = value.get<std::string>();
    }
  } else {
    throw ManifestParseError(line, "'choices' must be an object or array");
  }
  if (q.choices.empty()) throw ManifestParseError(line, "'choices' is empty");
  char expect = 'A';
  for (const auto& [letter, text] : q.choices) {
    if (letter != expect) {
      throw ManifestParseError(line, std::string("choice letters must be contiguous from A; missing ") + expect);
    }
    ++expect;
  }

  if (j.contains("answer") && !j["answer"].is_null()) {
    const auto a = j["answer"].is_string() ? j["answer"].get<std::string>() : std::string();
    if (a.size() != 1 || q.choices.count(a[0]) == 0) {
      throw ManifestParseError(line, "'answer' must be one of the choice letters");
    }
    q.answer = a[0];
  }
  if (j.contains("tags")) {
    if (!j["tags"].is_array()) throw ManifestParseError(line, "'tags' must be a list of strings");
    for (const json& t : j["tags"]) {
      if (!t.is_string()) throw ManifestParseError(line, "'tags' must be a list of strings");
      q.tags.push_back(t.get<std::string>());
    }
  }
  return q;
}

std::vector<Query> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestParseError(0, "cannot open manifest " + path);
  const std::string base_dir = std::filesystem::path(path).parent_path().string();

  std::vector<Query> out;
  std::set<std::string> ids;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ManifestParseError(line, "not valid JSON");
    Query q = parse_manifest_entry(j, line, base_dir);
    if (!ids.insert(q.id).second) {
      throw DuplicateId("duplicate query id '" + q.id + "' at manifest line " + std::to_string(line));
    }
    if (q.image_bytes.empty() && !std::filesystem::is_regular_file(q.image_path)) {
      throw MissingImage("image not found for query '" + q.id + "': " + q.image_path);
    }
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace ddp::harness
