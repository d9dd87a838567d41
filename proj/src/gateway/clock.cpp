#include "ddp/clock.hpp"

#include <algorithm>
#include <thread>

namespace ddp {

Clock::Participation Clock::enter() {
  join();
  return Participation(this);
}

SteadyClock::SteadyClock() : origin_(std::chrono::steady_clock::now()) {}

TimePoint SteadyClock::now() const {
  return std::chrono::duration_cast<Duration>(std::chrono::steady_clock::now() - origin_);
}

void SteadyClock::sleep_until(TimePoint deadline) {
  std::this_thread::sleep_until(origin_ + deadline);
}

void SteadyClock::wait_until(std::unique_lock<std::mutex>& lock, std::condition_variable& cv,
                             TimePoint deadline) {
  cv.wait_until(lock, origin_ + deadline);
}

Clock& steady_clock() {
  static SteadyClock clock;
  return clock;
}

TimePoint VirtualClock::now() const {
  std::lock_guard lock(mu_);
  return now_;
}

void VirtualClock::join() {
  std::lock_guard lock(mu_);
  ++participants_;
}

void VirtualClock::leave() {
  std::lock_guard lock(mu_);
  --participants_;
  maybe_advance_locked();
}

void VirtualClock::maybe_advance_locked() {
  std::size_t asleep = 0;
  for (const Sleeper* s : sleepers_) asleep += s->released ? 0 : 1;
  if (asleep == 0 || asleep < std::max<std::size_t>(participants_, 1)) return;

  TimePoint next = TimePoint::max();
  for (const Sleeper* s : sleepers_) {
    if (!s->released) next = std::min(next, s->deadline);
  }
  now_ = std::max(now_, next);
  for (Sleeper* s : sleepers_) {
    if (!s->released && s->deadline <= now_) s->released = true;
  }
  cv_.notify_all();
}

void VirtualClock::sleep_until(TimePoint deadline) {
  std::unique_lock lock(mu_);
  if (deadline <= now_) return;
  Sleeper self{deadline};
  sleepers_.push_back(&self);
  maybe_advance_locked();
  cv_.wait(lock, [&] { return self.released; });
  sleepers_.erase(std::find(sleepers_.begin(), sleepers_.end(), &self));
}

void VirtualClock::wait_until(std::unique_lock<std::mutex>& lock, std::condition_variable&,
                              TimePoint deadline) {
  const TimePoint cap = now() + kPollQuantum;
  lock.unlock();
  sleep_until(std::min(deadline, cap));
  lock.lock();
}

}  // namespace ddp
