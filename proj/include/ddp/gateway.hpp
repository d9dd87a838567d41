#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ddp/chat.hpp"
#include "ddp/clock.hpp"

namespace ddp::gateway {

struct Reply {
  std::string text;
  int attempts = 1;
};

struct BackendTrace {
  std::string request_digest;
  int key_index = -1;  // -1 for the mock backend
  int attempts = 0;
  double latency_ms = 0.0;
  std::string reply;
};

/// The single egress point for model calls. Implementations are internally
/// synchronized and may be called from any number of threads.
class Gateway {
 public:
  virtual ~Gateway() = default;
  virtual Reply send(const ChatRequest& request) = 0;
  [[nodiscard]] virtual std::vector<BackendTrace> traces() const = 0;
};

struct RateLimits {
  std::size_t max_in_flight = 8;
  std::size_t per_minute = 60;
};

/// Global in-flight cap plus a sliding 60 s issuance budget.
class RateLimiter {
 public:
  class Permit {
   public:
    explicit Permit(RateLimiter* owner) : owner_(owner) {}
    Permit(Permit&& o) noexcept : owner_(o.owner_) { o.owner_ = nullptr; }
    Permit& operator=(Permit&&) = delete;
    ~Permit() {
      if (owner_ != nullptr) owner_->release();
    }

   private:
    RateLimiter* owner_;
  };

  RateLimiter(RateLimits limits, Clock& clock);

  [[nodiscard]] Permit acquire();

  [[nodiscard]] std::size_t peak_in_flight() const;
  /// Largest number of issuances observed inside any 60 s window.
  [[nodiscard]] std::size_t peak_per_minute() const;
  [[nodiscard]] std::vector<TimePoint> issue_times() const;

 private:
  void release();

  RateLimits limits_;
  Clock& clock_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::size_t in_flight_ = 0;
  std::size_t peak_in_flight_ = 0;
  std::deque<TimePoint> window_;
  std::vector<TimePoint> issued_;
};

enum class Dialect { kOpenAiChat, kGeminiGenerate };

struct GatewayConfig {
  std::string endpoint = "https://generativelanguage.googleapis.com/v1beta/openai/chat/completions";
  Dialect dialect = Dialect::kOpenAiChat;
  std::string model = "gemini-3-pro-preview";
  double timeout_s = 120.0;
  int max_attempts = 5;
  double backoff_base_s = 1.0;
  double backoff_factor = 2.0;
  RateLimits limits{};
  double key_cooldown_s = 30.0;
  std::string trace_path;  // empty: no JSONL trace file
};

struct HttpResponse {
  int status = 0;          // 0 when the request never completed
  bool timed_out = false;  // transport-level timeout or connection failure
  std::string body;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const std::string& url,
                            const std::vector<std::pair<std::string, std::string>>& headers,
                            const std::string& body, double timeout_s) = 0;
};

/// cpp-httplib backed transport (http and https).
std::unique_ptr<HttpTransport> make_http_transport();

/// Builds the provider request body for `req`. Exposed for tests.
[[nodiscard]] std::string serialize_request(const ChatRequest& req, const GatewayConfig& cfg);
/// First text segment of a provider reply body; nullopt when it has none.
[[nodiscard]] std::optional<std::string> parse_reply(const std::string& body, Dialect dialect);

/// Splits DDP_API_KEYS-style comma-separated credentials, trimming blanks.
[[nodiscard]] std::vector<std::string> parse_keys(const std::string& csv);

class LiveGateway final : public Gateway {
 public:
  LiveGateway(GatewayConfig config, std::vector<std::string> keys,
              std::unique_ptr<HttpTransport> transport, Clock& clock = steady_clock());

  Reply send(const ChatRequest& request) override;
  [[nodiscard]] std::vector<BackendTrace> traces() const override;
  [[nodiscard]] const RateLimiter& limiter() const { return limiter_; }

  /// Key index used for each attempt, in issue order.
  [[nodiscard]] std::vector<int> key_history() const;

 private:
  int next_key();
  void cool_down(int key);
  void append_trace(BackendTrace t);

  GatewayConfig config_;
  std::vector<std::string> keys_;
  std::unique_ptr<HttpTransport> transport_;
  Clock& clock_;
  RateLimiter limiter_;

  mutable std::mutex mu_;
  std::size_t cursor_ = 0;
  std::vector<TimePoint> cooldown_until_;
  std::vector<int> key_history_;
  std::vector<BackendTrace> traces_;
};

/// Scripted backend. Replies come from one of:
///   sequence - a single global playback list;
///   digest   - stable_digest(request) -> reply;
///   rules    - first rule whose substrings all occur in the request text
///              yields the next reply from that rule's queue.
struct MockScript {
  enum class Mode { kSequence, kDigest, kRules };
  struct Rule {
    std::vector<std::string> contains;
    std::vector<std::string> replies;
  };

  Mode mode = Mode::kSequence;
  std::vector<std::string> sequence;
  std::map<std::string, std::string> by_digest;
  std::vector<Rule> rules;
  bool strict = true;           // digest mode: unmatched request throws
  std::string fallback_reply;   // used when strict == false

  /// Parses the JSON script format documented in README.md.
  static MockScript from_json_text(const std::string& text);
  static MockScript load(const std::string& path);
};

struct MockOptions {
  Duration latency{0};
  std::optional<RateLimits> limits;
  Clock* clock = nullptr;  // defaults to steady_clock()
};

class MockGateway final : public Gateway {
 public:
  explicit MockGateway(MockScript script, MockOptions options = {});

  Reply send(const ChatRequest& request) override;
  [[nodiscard]] std::vector<BackendTrace> traces() const override;

  [[nodiscard]] std::vector<ChatRequest> recorded() const;
  [[nodiscard]] std::size_t call_count() const;
  [[nodiscard]] const RateLimiter* limiter() const { return limiter_.get(); }

 private:
  std::string next_reply(const ChatRequest& request);

  MockScript script_;
  MockOptions options_;
  Clock& clock_;
  std::unique_ptr<RateLimiter> limiter_;

  mutable std::mutex mu_;
  std::size_t seq_cursor_ = 0;
  std::vector<std::size_t> rule_cursor_;
  std::vector<ChatRequest> recorded_;
  std::vector<BackendTrace> traces_;
};

/// Per-caller view over a shared gateway that tallies calls and attempts.
class CountingGateway final : public Gateway {
 public:
  explicit CountingGateway(Gateway& inner) : inner_(inner) {}
  Reply send(const ChatRequest& request) override;
  [[nodiscard]] std::vector<BackendTrace> traces() const override { return inner_.traces(); }
  [[nodiscard]] int calls() const { return calls_; }
  [[nodiscard]] int attempts() const { return attempts_; }

 private:
  Gateway& inner_;
  int calls_ = 0;
  int attempts_ = 0;
};

/// One JSON object per line summarizing each request (texts, image sizes,
/// payload digest). Used by `ddp run --record`.
void write_request_log(const std::vector<ChatRequest>& requests, const std::string& path);
std::string trace_to_json_line(const BackendTrace& t);

}  // namespace ddp::gateway
