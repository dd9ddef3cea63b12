#include "fso/diagnostics.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace fso::diagnostics {

namespace {

std::atomic<std::uint64_t> near_field_count{0};

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& handler() {
    static WarningHandler h = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler h) {
    std::lock_guard lock(handler_mutex());
    WarningHandler previous = std::move(handler());
    handler() = std::move(h);
    return previous;
}

void warn_near_field() {
    if (near_field_count.fetch_add(1, std::memory_order_relaxed) != 0) return;
    std::lock_guard lock(handler_mutex());
    if (handler()) {
        handler()(
            "drone distance is less than 100x the footprint offset or aperture radius; "
            "the oblique beam density may be inaccurate");
    }
}

std::uint64_t near_field_warning_count() noexcept {
    return near_field_count.load(std::memory_order_relaxed);
}

}  // namespace fso::diagnostics
