#pragma once

#include <exception>
#include <mutex>

namespace lagrangeflow {

/// Worker count used by every OpenMP kernel. Results never depend on it.
int worker_count();
void set_worker_count(int workers);

/// Applies LAGRANGEFLOW_THREADS (if set and positive) as the worker count.
void apply_thread_env();

class ScopedWorkers {
public:
    explicit ScopedWorkers(int workers) : previous_(worker_count()) { set_worker_count(workers); }
    ~ScopedWorkers() { set_worker_count(previous_); }
    ScopedWorkers(const ScopedWorkers&) = delete;
    ScopedWorkers& operator=(const ScopedWorkers&) = delete;

private:
    int previous_;
};

/// Carries the first exception out of an OpenMP region, where throwing would terminate.
class ExceptionRelay {
public:
    template <class F>
    void run(F&& f) noexcept {
        try {
            f();
        } catch (...) {
            const std::lock_guard lock(mutex_);
            if (!error_) error_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

}  // namespace lagrangeflow
