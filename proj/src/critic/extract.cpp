#include <cctype>
#include <string>

#include "ddp/critic.hpp"

namespace ddp::critic {

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// Letter following a "final answer" marker at `pos` (just past the marker).
std::optional<char> letter_after_marker(std::string_view s, std::size_t pos) {
  auto skip = [&](std::string_view chars) {
    while (pos < s.size() && chars.find(s[pos]) != std::string_view::npos) ++pos;
  };
  auto skip_word = [&](std::string_view word) {
    if (lower(s.substr(pos, word.size())) == word &&
        (pos + word.size() >= s.size() || !is_word_char(s[pos + word.size()]))) {
      pos += word.size();
    }
  };
  skip(" \t*_:=-");
  skip_word("is");
  skip(" \t*_:");
  skip_word("option");
  skip(" \t*_([");
  if (pos >= s.size()) return std::nullopt;
  const char c = s[pos];
  if (!std::isupper(static_cast<unsigned char>(c))) return std::nullopt;
  if (pos + 1 < s.size() && is_word_char(s[pos + 1])) return std::nullopt;
  return c;
}

std::optional<char> by_marker(std::string_view reply, const std::set<char>& valid) {
  const std::string low = lower(reply);
  std::optional<char> found;
  constexpr std::string_view kMarker = "final answer";
  for (std::size_t at = low.find(kMarker); at != std::string::npos;
       at = low.find(kMarker, at + 1)) {
    if (auto c = letter_after_marker(reply, at + kMarker.size()); c && valid.count(*c)) found = c;
  }
  return found;
}

std::optional<char> by_last_line(std::string_view reply, const std::set<char>& valid) {
  std::size_t end = reply.size();
  while (end > 0) {
    const std::size_t nl = reply.rfind('\n', end - 1);
    const std::size_t begin = nl == std::string_view::npos ? 0 : nl + 1;
    std::string core;
    for (char c : reply.substr(begin, end - begin)) {
      if (std::string_view(" \t\r*()[].:").find(c) == std::string_view::npos) core.push_back(c);
    }
    if (!core.empty()) {
      if (core.size() == 1 && valid.count(core[0])) return core[0];
      return std::nullopt;
    }
    if (nl == std::string_view::npos) break;
    end = nl;
  }
  return std::nullopt;
}

std::optional<char> by_bracket(std::string_view reply, const std::set<char>& valid) {
  std::optional<char> found;
  // Left to right, non-overlapping: in "**A**B**" only A is bold.
  for (std::size_t i = 0; i < reply.size(); ++i) {
    const bool upper = i + 1 < reply.size() && std::isupper(static_cast<unsigned char>(reply[i + 1]));
    if (reply[i] == '(' && i + 2 < reply.size() && reply[i + 2] == ')' && upper) {
      if (valid.count(reply[i + 1])) found = reply[i + 1];
      i += 2;
    } else if (reply.compare(i, 2, "**") == 0 && i + 4 < reply.size() &&
               std::isupper(static_cast<unsigned char>(reply[i + 2])) &&
               reply.compare(i + 3, 2, "**") == 0) {
      if (valid.count(reply[i + 2])) found = reply[i + 2];
      i += 4;
    }
  }
  return found;
}

}  // namespace

std::optional<char> extract_option(std::string_view reply, const std::set<char>& valid_letters) {
  if (auto c = by_marker(reply, valid_letters)) return c;
  if (auto c = by_last_line(reply, valid_letters)) return c;
  return by_bracket(reply, valid_letters);
}

}  // namespace ddp::critic
