#include <algorithm>
#include <chrono>

#include "ddp/errors.hpp"
#include "ddp/gateway.hpp"

namespace ddp::gateway {

namespace {
constexpr Duration kWindow = std::chrono::seconds(60);
}

RateLimiter::RateLimiter(RateLimits limits, Clock& clock) : limits_(limits), clock_(clock) {
  if (limits_.max_in_flight < 1 || limits_.per_minute < 1) {
    throw ConfigError("rate limits must be >= 1");
  }
}

RateLimiter::Permit RateLimiter::acquire() {
  std::unique_lock lock(mu_);
  for (;;) {
    const TimePoint now = clock_.now();
    while (!window_.empty() && window_.front() + kWindow <= now) window_.pop_front();
    const bool slot_free = in_flight_ < limits_.max_in_flight;
    const bool budget_free = window_.size() < limits_.per_minute;
    if (slot_free && budget_free) {
      ++in_flight_;
      peak_in_flight_ = std::max(peak_in_flight_, in_flight_);
      window_.push_back(now);
      issued_.push_back(now);
      return Permit(this);
    }
    const TimePoint deadline = budget_free ? TimePoint::max() : window_.front() + kWindow;
    clock_.wait_until(lock, cv_, deadline);
  }
}

void RateLimiter::release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  cv_.notify_all();
}

std::size_t RateLimiter::peak_in_flight() const {
  std::lock_guard lock(mu_);
  return peak_in_flight_;
}

std::size_t RateLimiter::peak_per_minute() const {
  std::lock_guard lock(mu_);
  std::size_t peak = 0;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < issued_.size(); ++hi) {
    while (issued_[lo] + kWindow <= issued_[hi]) ++lo;
    peak = std::max(peak, hi - lo + 1);
  }
  return peak;
}

std::vector<TimePoint> RateLimiter::issue_times() const {
  std::lock_guard lock(mu_);
  return issued_;
}

}  // namespace ddp::gateway
