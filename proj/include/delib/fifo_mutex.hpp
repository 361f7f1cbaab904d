#pragma once

#include <condition_variable>
#include <cstdint>
#include <mutex>

namespace delib {

// Ticket lock: waiters acquire in arrival order. Satisfies Lockable.
class FifoMutex {
 public:
  void lock() {
    std::unique_lock guard(mutex_);
    const std::uint64_t ticket = next_ticket_++;
    cv_.wait(guard, [&] { return now_serving_ == ticket; });
  }

  bool try_lock() {
    std::lock_guard guard(mutex_);
    if (now_serving_ != next_ticket_) return false;
    ++next_ticket_;
    return true;
  }

  void unlock() {
    {
      std::lock_guard guard(mutex_);
      ++now_serving_;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::uint64_t next_ticket_ = 0;
  std::uint64_t now_serving_ = 0;
};

}  // namespace delib
