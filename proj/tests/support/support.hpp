#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ddp/gateway.hpp"
#include "ddp/harness.hpp"
#include "ddp/pipeline.hpp"
#include "ddp/query.hpp"
#include "ddp/raster.hpp"

namespace ddp::test {

inline constexpr std::uint32_t kSeed = 20251016;

[[nodiscard]] raster::Raster random_raster(std::mt19937& rng, int w, int h);
[[nodiscard]] raster::Raster gradient(int w, int h);
[[nodiscard]] raster::Raster checkerboard(int w, int h, int cell);
[[nodiscard]] raster::BinaryMask random_mask(std::mt19937& rng, int w, int h);

/// n * sum(x^2) - (sum x)^2 for one channel, i.e. n^2 times the population
/// variance, in integers.
[[nodiscard]] std::int64_t scaled_variance(const raster::Raster& img, int channel);

/// A 500x400 park scene: one tan dog whose body is interrupted by a tree trunk.
[[nodiscard]] raster::Raster occluded_dog_scene();
[[nodiscard]] Query occluded_dog_query();
/// classify -> red_box -> crop -> STOP -> critic, as a sequence script.
[[nodiscard]] std::vector<std::string> occluded_dog_replies();

/// Defaults, with concurrency 1.
[[nodiscard]] pipeline::PipelineConfig test_config();

enum class Stage { kClassify, kAgent, kCritic };
[[nodiscard]] Stage stage_of(const gateway::ChatRequest& req);
[[nodiscard]] std::string all_text(const gateway::ChatRequest& req);

struct ImageDims {
  int width;
  int height;
  friend bool operator==(const ImageDims&, const ImageDims&) = default;
};
/// Image parts in message order.
[[nodiscard]] std::vector<ImageDims> images_of(const gateway::ChatRequest& req);

/// Answers as a pure function of the request content. Questions must start
/// with "[<id>]".
class ContentGateway final : public gateway::Gateway {
 public:
  gateway::Reply send(const gateway::ChatRequest& request) override;
  [[nodiscard]] std::vector<gateway::BackendTrace> traces() const override { return {}; }

  /// The reply the gateway gives for `request`.
  [[nodiscard]] static std::string reply_for(const gateway::ChatRequest& request);
};

/// `n` queries "q000".. with in-memory PNGs of varying size, keyed answers
/// and a few tags.
[[nodiscard]] std::vector<Query> synthetic_queries(std::size_t n, std::uint32_t seed = kSeed);

/// Runs `queries` once through ContentGateway at concurrency 1 and captures
/// every (stable digest -> reply) pair as a strict digest script.
[[nodiscard]] gateway::MockScript record_digest_script(const std::vector<Query>& queries,
                                                       const pipeline::PipelineConfig& config);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

[[nodiscard]] std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

[[nodiscard]] std::string fixture(const std::string& name);

/// A record with only the fields score() reads.
[[nodiscard]] pipeline::RunRecord scored_record(const std::string& id, const std::string& class_id,
                                                std::optional<char> option, char answer,
                                                bool failed = false);

}  // namespace ddp::test
