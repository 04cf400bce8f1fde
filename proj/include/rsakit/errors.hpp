// errors.hpp -- exception types and resource limits shared by all modules
#pragma once

#include <atomic>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace rsakit {

/// Malformed automaton, net, word or expression supplied by the caller.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configurable cap (macrostates, basis size, regions, ...) was exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A long-running computation observed a cancellation request.
class Cancelled : public std::runtime_error {
public:
    Cancelled() : std::runtime_error("cancelled") {}
};

/// Cooperative cancellation flag; set from a signal handler, polled by loops.
struct CancelToken {
    std::atomic<bool> requested{false};

    void request() noexcept { requested.store(true, std::memory_order_relaxed); }
    bool is_requested() const noexcept { return requested.load(std::memory_order_relaxed); }
};

inline void poll(const CancelToken* token) {
    if (token != nullptr && token->is_requested()) {
        throw Cancelled();
    }
}

struct Limits {
    std::size_t macrostates = 100000;
    std::size_t basis = 1000000;
    std::size_t forward_depth = 64;
    std::size_t region_registers = 16;  // 2^16 region places at most
};

}  // namespace rsakit
