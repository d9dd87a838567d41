#include "support.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>

#include "ddp/errors.hpp"
#include "ddp/raster_ops.hpp"
#include "ddp/taxonomy.hpp"

namespace ddp::test {

using gateway::ChatRequest;
using gateway::Role;
using raster::Raster;
using raster::Rgb;

Raster random_raster(std::mt19937& rng, int w, int h) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * 3);
  for (auto& v : px) v = static_cast<std::uint8_t>(byte(rng));
  return Raster(w, h, std::move(px));
}

Raster gradient(int w, int h) {
  Raster img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.set(x, y, {static_cast<std::uint8_t>((x * 255) / std::max(1, w - 1)),
                     static_cast<std::uint8_t>((y * 255) / std::max(1, h - 1)),
                     static_cast<std::uint8_t>(((x + y) * 7) % 256)});
    }
  }
  return img;
}

Raster checkerboard(int w, int h, int cell) {
  Raster img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool on = ((x / cell) + (y / cell)) % 2 == 0;
      img.set(x, y, on ? Rgb{230, 200, 40} : Rgb{20, 60, 210});
    }
  }
  return img;
}

raster::BinaryMask random_mask(std::mt19937& rng, int w, int h) {
  std::bernoulli_distribution bit(0.5);
  raster::BinaryMask m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) m.set(x, y, bit(rng));
  }
  return m;
}

std::int64_t scaled_variance(const Raster& img, int channel) {
  std::int64_t sum = 0;
  std::int64_t sum_sq = 0;
  const auto bytes = img.bytes();
  for (std::size_t i = static_cast<std::size_t>(channel); i < bytes.size(); i += 3) {
    sum += bytes[i];
    sum_sq += static_cast<std::int64_t>(bytes[i]) * bytes[i];
  }
  const auto n = static_cast<std::int64_t>(img.pixel_count());
  return n * sum_sq - sum * sum;
}

namespace {

void fill_rect(Raster& img, int x0, int y0, int w, int h, Rgb c) {
  for (int y = std::max(0, y0); y < std::min(img.height(), y0 + h); ++y) {
    for (int x = std::max(0, x0); x < std::min(img.width(), x0 + w); ++x) img.set(x, y, c);
  }
}

void fill_ellipse(Raster& img, int cx, int cy, int rx, int ry, Rgb c) {
  for (int y = cy - ry; y <= cy + ry; ++y) {
    for (int x = cx - rx; x <= cx + rx; ++x) {
      const double dx = static_cast<double>(x - cx) / rx;
      const double dy = static_cast<double>(y - cy) / ry;
      if (dx * dx + dy * dy <= 1.0 && img.contains(x, y)) img.set(x, y, c);
    }
  }
}

}  // namespace

Raster occluded_dog_scene() {
  Raster img(500, 400, Rgb{150, 200, 240});
  fill_rect(img, 0, 260, 500, 140, Rgb{90, 160, 70});
  // Foliage texture gives the smoothing stage something to remove.
  for (int y = 0; y < 140; y += 4) {
    for (int x = (y / 4) % 2 * 4; x < 500; x += 8) fill_rect(img, x, y, 2, 2, Rgb{60, 130, 60});
  }
  const Rgb fur{200, 150, 90};
  const Rgb dark{90, 60, 30};
  fill_ellipse(img, 250, 270, 110, 32, fur);   // body
  fill_ellipse(img, 120, 245, 30, 26, fur);    // head, left
  fill_rect(img, 95, 232, 10, 10, dark);       // eye
  fill_ellipse(img, 375, 240, 28, 10, fur);    // tail, right
  for (int leg : {170, 200, 300, 330}) fill_rect(img, leg, 290, 12, 45, fur);
  fill_rect(img, 225, 0, 50, 400, Rgb{110, 75, 40});  // trunk
  fill_ellipse(img, 250, 40, 130, 60, Rgb{40, 110, 40});
  return img;
}

Query occluded_dog_query() {
  Query q;
  q.id = "dog";
  const auto png = raster::encode_image(occluded_dog_scene());
  q.image_bytes.assign(png.begin(), png.end());
  q.question = "How many dogs are in the image?";
  q.choices = {{'A', "0"}, {'B', "1"}, {'C', "2"}, {'D', "3"}};
  q.answer = 'C';
  q.tags = {"illusion"};
  return q;
}

std::vector<std::string> occluded_dog_replies() {
  return {
      R"({"category": "perceptual_phenomena", "subtask": "counting"})",
      R"(The trunk hides the middle of the animal. {"tool": "red_box", "params": {"x": 66, "y": 0, "w": 18, "h": 120, "thickness": 2}, "note": "mark the trunk"})",
      R"({"tool": "crop", "params": {"x": 20, "y": 60, "w": 110, "h": 50}, "note": "zoom on the animal"})",
      "STOP",
      "The head on the left and the tail on the right sit at different heights, and the "
      "trunk width mismatches the gap a single body would need. These are two dogs.\n"
      "Final Answer: C",
  };
}

pipeline::PipelineConfig test_config() {
  pipeline::PipelineConfig c;
  c.concurrency = 1;
  return c;
}

std::string all_text(const ChatRequest& req) {
  std::string s;
  for (const auto& m : req.messages) {
    for (const auto& p : m.parts) {
      if (p.is_text()) s += p.text_value() + "\n";
    }
  }
  return s;
}

Stage stage_of(const ChatRequest& req) {
  const std::string system =
      !req.messages.empty() && req.messages.front().role == Role::kSystem &&
              !req.messages.front().parts.empty()
          ? req.messages.front().parts.front().text_value()
          : std::string();
  if (system.find("task classifier") != std::string::npos) return Stage::kClassify;
  if (system.find("tool manager") != std::string::npos) return Stage::kAgent;
  return Stage::kCritic;
}

std::vector<ImageDims> images_of(const ChatRequest& req) {
  std::vector<ImageDims> out;
  for (const auto& m : req.messages) {
    for (const auto& p : m.parts) {
      if (!p.is_text()) out.push_back({p.image_width(), p.image_height()});
    }
  }
  return out;
}

namespace {

std::string query_tag(const ChatRequest& req) {
  const std::string text = all_text(req);
  const auto open = text.find("Question:\n[");
  if (open == std::string::npos) return "";
  const auto start = open + 11;
  const auto close = text.find(']', start);
  return text.substr(start, close - start);
}

std::uint32_t tag_hash(const std::string& tag) {
  std::uint32_t h = 2166136261u;
  for (char c : tag) h = (h ^ static_cast<unsigned char>(c)) * 16777619u;
  return h;
}

}  // namespace

std::string ContentGateway::reply_for(const ChatRequest& req) {
  const std::string tag = query_tag(req);
  const std::uint32_t h = tag_hash(tag);
  switch (stage_of(req)) {
    case Stage::kClassify: {
      const auto all = taxonomy::TaskConfig::all();
      const auto& c = all[h % all.size()];
      if (h % 11 == 3 && req.messages.size() == 2) return "I am not sure what this is.";
      return "{\"category\": \"" + std::string(taxonomy::category_key(c.category())) +
             "\", \"subtask\": \"" + std::string(taxonomy::subtask_key(c.subtask())) + "\"}";
    }
    case Stage::kAgent: {
      int steps = 0;
      for (const auto& m : req.messages) steps += m.role == Role::kAssistant ? 1 : 0;
      const auto dims = images_of(req).front();
      if (steps >= static_cast<int>(h % 3)) return "STOP";
      if (steps == 0) {
        return "{\"tool\": \"crop\", \"params\": {\"x\": 0, \"y\": 0, \"w\": " +
               std::to_string(std::max(1, dims.width / 2)) +
               ", \"h\": " + std::to_string(std::max(1, dims.height / 2)) + "}}";
      }
      return R"({"tool": "polar_auxline", "params": {"cx": 1, "cy": 1, "radii": [3]}})";
    }
    case Stage::kCritic: {
      if (h % 7 == 5) return "I cannot tell from this image.";
      const char letter = static_cast<char>('A' + (h >> 4) % 4);
      return "Reasoning about " + tag + ".\nFinal Answer: " + std::string(1, letter);
    }
  }
  return "";
}

gateway::Reply ContentGateway::send(const ChatRequest& request) {
  request.validate();
  return {reply_for(request), 1};
}

std::vector<Query> synthetic_queries(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> side(40, 320);
  std::vector<Query> out;
  for (std::size_t i = 0; i < n; ++i) {
    Query q;
    char id[32];
    std::snprintf(id, sizeof id, "q%03zu", i);
    q.id = id;
    const auto png = raster::encode_image(random_raster(rng, side(rng), side(rng)));
    q.image_bytes.assign(png.begin(), png.end());
    q.question = "[" + q.id + "] Which option describes the image?";
    q.choices = {{'A', "first"}, {'B', "second"}, {'C', "third"}, {'D', "fourth"}};
    q.answer = static_cast<char>('A' + i % 4);
    q.tags = {i % 2 == 0 ? "even" : "odd"};
    out.push_back(std::move(q));
  }
  return out;
}

namespace {

class DigestRecorder final : public gateway::Gateway {
 public:
  gateway::Reply send(const ChatRequest& request) override {
    std::string reply = ContentGateway::reply_for(request);
    std::lock_guard lock(mu_);
    script.by_digest[gateway::stable_digest(request)] = reply;
    return {std::move(reply), 1};
  }
  [[nodiscard]] std::vector<gateway::BackendTrace> traces() const override { return {}; }

  gateway::MockScript script;

 private:
  std::mutex mu_;
};

}  // namespace

gateway::MockScript record_digest_script(const std::vector<Query>& queries,
                                         const pipeline::PipelineConfig& config) {
  DigestRecorder recorder;
  recorder.script.mode = gateway::MockScript::Mode::kDigest;
  recorder.script.strict = true;
  harness::BatchOptions opts;
  opts.concurrency = 1;
  (void)harness::run_batch(queries, config, recorder, opts);
  return recorder.script;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("ddp_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string fixture(const std::string& name) {
  return (std::filesystem::path(DDP_FIXTURE_DIR) / name).string();
}

pipeline::RunRecord scored_record(const std::string& id, const std::string& class_id,
                                  std::optional<char> option, char answer, bool failed) {
  pipeline::RunRecord r;
  r.query_id = id;
  r.answer = answer;
  r.config_digest = "0123456789abcdef";
  if (failed) {
    r.status = pipeline::RecordStatus::kFailed;
    r.error = "simulated failure";
    r.correct = false;
    return r;
  }
  r.class_id = class_id;
  critic::Verdict v;
  v.option = option;
  v.abstained = !option.has_value();
  r.verdict = v;
  r.correct = option.has_value() && *option == answer;
  return r;
}

}  // namespace ddp::test
