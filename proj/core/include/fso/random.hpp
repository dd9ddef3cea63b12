#pragma once

// Counter-based random numbers. A stream is identified by (seed, stream id);
// its n-th block is Philox4x32-10(counter = (n, stream id), key = seed), so
// any trial can be regenerated without touching the others.

#include <array>
#include <cstdint>
#include <limits>

namespace fso::random {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

class CounterStream {
public:
    using result_type = std::uint64_t;

    CounterStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    // Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept;

    // Standard normal by inverse-CDF transform of uniform().
    double normal();

private:
    PhiloxKey key_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int used_ = 2;
};

}  // namespace fso::random
