#include <bit>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "fso/random.hpp"

using namespace fso::random;

TEST_SUITE("random") {

TEST_CASE("philox4x32-10 known answers") {
    // Reference vectors published with the Random123 library.
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
          PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
    CounterStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        CHECK(x == b());
        seen.insert(x);
        seen.insert(c());
        seen.insert(d());
    }
    CHECK(seen.size() == 300);
}

TEST_CASE("uniforms lie strictly inside (0, 1) with the right moments") {
    CounterStream s(1, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
    CHECK(std::abs(sum2 / n - mean * mean - 1.0 / 12) < 1e-3);
}

TEST_CASE("normals have zero mean, unit variance and light tails") {
    CounterStream s(2, 3);
    const int n = 400000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    int beyond3 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = s.normal();
        sum += x;
        sum2 += x * x;
        sum4 += x * x * x * x;
        if (std::abs(x) > 3) ++beyond3;
    }
    CHECK(std::abs(sum / n) < 5 / std::sqrt(double(n)));
    CHECK(std::abs(sum2 / n - 1.0) < 5 * std::sqrt(2.0 / n));
    CHECK(std::abs(sum4 / n - 3.0) < 5 * std::sqrt(96.0 / n));
    const double expected = n * 0.0026997960632601866;
    CHECK(std::abs(beyond3 - expected) < 5 * std::sqrt(expected));
}

TEST_CASE("CounterStream is a uniform random bit generator") {
    CounterStream s(5, 5);
    static_assert(CounterStream::min() == 0);
    std::uint64_t ones = 0;
    for (int i = 0; i < 10000; ++i) ones += std::popcount(s());
    CHECK(std::abs(double(ones) - 320000.0) < 5 * std::sqrt(160000.0));
}

}  // TEST_SUITE
