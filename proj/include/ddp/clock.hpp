#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <mutex>
#include <vector>

namespace ddp {

using Duration = std::chrono::nanoseconds;
/// Time since the clock's own epoch.
using TimePoint = std::chrono::nanoseconds;

inline double to_ms(Duration d) { return std::chrono::duration<double, std::milli>(d).count(); }

class Clock {
 public:
  class Participation;

  virtual ~Clock() = default;
  [[nodiscard]] virtual TimePoint now() const = 0;
  virtual void sleep_until(TimePoint deadline) = 0;
  void sleep_for(Duration d) { sleep_until(now() + d); }

  /// Waits on `cv` (with `lock` held on entry and exit) until notified or
  /// `deadline`. Callers must re-check their predicate; wakeups may be spurious.
  virtual void wait_until(std::unique_lock<std::mutex>& lock, std::condition_variable& cv,
                          TimePoint deadline) = 0;

  /// Registers the calling thread as a worker for the lifetime of the guard.
  /// Only the virtual clock cares.
  [[nodiscard]] Participation enter();

 protected:
  virtual void join() {}
  virtual void leave() {}
};

class Clock::Participation {
 public:
  explicit Participation(Clock* clock) : clock_(clock) {}
  Participation(Participation&& o) noexcept : clock_(o.clock_) { o.clock_ = nullptr; }
  Participation& operator=(Participation&&) = delete;
  Participation(const Participation&) = delete;
  ~Participation() {
    if (clock_ != nullptr) clock_->leave();
  }

 private:
  Clock* clock_;
};

class SteadyClock final : public Clock {
 public:
  SteadyClock();
  [[nodiscard]] TimePoint now() const override;
  void sleep_until(TimePoint deadline) override;
  void wait_until(std::unique_lock<std::mutex>& lock, std::condition_variable& cv,
                  TimePoint deadline) override;

 private:
  std::chrono::steady_clock::time_point origin_;
};

/// Process-wide real clock.
Clock& steady_clock();

/// Discrete-event clock for tests. Virtual time jumps to the earliest pending
/// deadline once every participant thread is asleep on this clock. With no registered
/// participants, the sleeping caller counts as the only one.
class VirtualClock final : public Clock {
 public:
  /// Upper bound on one virtual wait_until; condition waiters re-poll after it.
  static constexpr Duration kPollQuantum = std::chrono::milliseconds(1);

  [[nodiscard]] TimePoint now() const override;
  void sleep_until(TimePoint deadline) override;
  void wait_until(std::unique_lock<std::mutex>& lock, std::condition_variable& cv,
                  TimePoint deadline) override;

 protected:
  void join() override;
  void leave() override;

 private:
  struct Sleeper {
    TimePoint deadline;
    bool released = false;
  };

  void maybe_advance_locked();

  mutable std::mutex mu_;
  std::condition_variable cv_;
  TimePoint now_{0};
  std::size_t participants_ = 0;
  std::vector<Sleeper*> sleepers_;
};

}  // namespace ddp
