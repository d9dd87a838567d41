#include "ddp/chat.hpp"

#include <openssl/evp.h>

#include <cstdio>

#include "ddp/errors.hpp"
#include "ddp/raster_ops.hpp"

namespace ddp::gateway {

const char* to_string(Role r) {
  switch (r) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
    case Role::kTool: return "tool";
  }
  return "user";
}

ChatPart ChatPart::text(std::string t) {
  ChatPart p;
  p.text_ = std::move(t);
  return p;
}

ChatPart ChatPart::image(const raster::Raster& img) {
  ChatPart p;
  p.png_ = raster::encode_image(img);
  p.width_ = img.width();
  p.height_ = img.height();
  return p;
}

void ChatRequest::validate() const {
  for (const ChatMessage& m : messages) {
    if (m.role == Role::kUser) return;
  }
  throw InvalidArgument("chat request has no user message");
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  hex.reserve(len * 2);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

namespace {

// Length-prefixed fields.
void put(std::string& s, const std::string& field) {
  s += std::to_string(field.size());
  s += ':';
  s += field;
}

std::string canonical(const ChatRequest& req, bool with_pixels) {
  std::string s;
  for (const ChatMessage& m : req.messages) {
    put(s, to_string(m.role));
    for (const ChatPart& p : m.parts) {
      if (p.is_text()) {
        put(s, "t");
        put(s, p.text_value());
      } else {
        put(s, "i");
        put(s, std::to_string(p.image_width()) + "x" + std::to_string(p.image_height()));
        if (with_pixels) put(s, std::string(p.png().begin(), p.png().end()));
      }
    }
    put(s, "/m");
  }
  if (with_pixels) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g|%.17g|%d", req.temperature, req.top_p, req.max_output);
    put(s, buf);
  }
  return s;
}

}  // namespace

std::string stable_digest(const ChatRequest& req) { return sha256_hex(canonical(req, false)); }

std::string payload_digest(const ChatRequest& req) { return sha256_hex(canonical(req, true)); }

}  // namespace ddp::gateway
