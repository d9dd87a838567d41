#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddp/critic.hpp"

namespace ddp {

/// One benchmark item. Exactly one of image_path / image_bytes is used;
/// image_bytes wins when non-empty.
struct Query {
  std::string id;
  std::string image_path;
  std::vector<std::uint8_t> image_bytes;
  std::string question;
  critic::Choices choices;
  std::optional<char> answer;
  std::vector<std::string> tags;  // reporting only, never sent to the model
};

}  // namespace ddp
