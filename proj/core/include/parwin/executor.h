#ifndef PARWIN_EXECUTOR_H
#define PARWIN_EXECUTOR_H

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>

namespace parwin {

namespace detail {
inline thread_local int worker_index = -1;
}

/// Index of the pool worker running the calling thread, or -1 outside a pool.
inline int current_worker_index() {
    return detail::worker_index;
}

/// Runs submitted tasks, possibly concurrently and in any order. Tasks must not throw; callers
/// capture failures themselves.
class Executor {
   public:
    virtual ~Executor() = default;
    virtual void submit(std::function<void()> task) = 0;
    virtual size_t concurrency() const = 0;
};

/// Runs each task on the submitting thread before submit() returns.
class InlineExecutor final : public Executor {
   public:
    void submit(std::function<void()> task) override {
        task();
    }
    size_t concurrency() const override {
        return 1;
    }
};

/// Unbounded multi-producer queue with blocking pop.
template <typename T>
class BlockingQueue {
   public:
    void push(T value) {
        {
            std::lock_guard lock(mutex_);
            items_.push_back(std::move(value));
        }
        ready_.notify_one();
    }

    T pop() {
        std::unique_lock lock(mutex_);
        ready_.wait(lock, [&] { return !items_.empty(); });
        T value = std::move(items_.front());
        items_.pop_front();
        return value;
    }

    template <typename Clock, typename Duration>
    std::optional<T> pop_until(const std::chrono::time_point<Clock, Duration>& deadline) {
        std::unique_lock lock(mutex_);
        if (!ready_.wait_until(lock, deadline, [&] { return !items_.empty(); }))
            return std::nullopt;
        T value = std::move(items_.front());
        items_.pop_front();
        return value;
    }

   private:
    std::mutex mutex_;
    std::condition_variable ready_;
    std::deque<T> items_;
};

}  // namespace parwin

#endif
