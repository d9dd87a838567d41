#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddp/raster.hpp"

namespace ddp::gateway {

enum class Role { kSystem, kUser, kAssistant, kTool };

[[nodiscard]] const char* to_string(Role r);

/// A message part carries exactly one payload: text, or a PNG-encoded image.
class ChatPart {
 public:
  static ChatPart text(std::string t);
  /// Encodes `img` as PNG; the dimensions are kept for digests and assertions.
  static ChatPart image(const raster::Raster& img);

  [[nodiscard]] bool is_text() const noexcept { return !png_.has_value(); }
  [[nodiscard]] const std::string& text_value() const noexcept { return text_; }
  [[nodiscard]] const std::vector<std::uint8_t>& png() const { return *png_; }
  [[nodiscard]] int image_width() const noexcept { return width_; }
  [[nodiscard]] int image_height() const noexcept { return height_; }
  [[nodiscard]] static constexpr const char* media_type() { return "image/png"; }

 private:
  std::string text_;
  std::optional<std::vector<std::uint8_t>> png_;
  int width_ = 0;
  int height_ = 0;
};

struct ChatMessage {
  Role role = Role::kUser;
  std::vector<ChatPart> parts;
};

inline constexpr double kDefaultTemperature = 0.1;
inline constexpr double kDefaultTopP = 1.0;

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = kDefaultTemperature;
  double top_p = kDefaultTopP;
  int max_output = 2048;

  ChatRequest& add(Role role, std::vector<ChatPart> parts) {
    messages.push_back({role, std::move(parts)});
    return *this;
  }
  ChatRequest& add_text(Role role, std::string text) {
    return add(role, {ChatPart::text(std::move(text))});
  }

  /// Throws InvalidArgument when there is no user message.
  void validate() const;
};

/// SHA-256 over roles, texts and image dimensions (not image bytes). This is
/// the key for digest-scripted mocks.
[[nodiscard]] std::string stable_digest(const ChatRequest& req);
/// SHA-256 over the full payload including PNG bytes.
[[nodiscard]] std::string payload_digest(const ChatRequest& req);

[[nodiscard]] std::string sha256_hex(const std::string& data);
[[nodiscard]] std::string base64_encode(const std::vector<std::uint8_t>& bytes);

}  // namespace ddp::gateway
