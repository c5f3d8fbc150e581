#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "cubedac/mathutil.hpp"
#include "cubedac/rng.hpp"

using cubedac::Rng;

TEST_CASE("engine output is the standard-pinned mt19937_64 sequence") {
    // The C++ standard fixes the 10000th draw of a default-seeded (5489)
    // mersenne twister; any library or platform must reproduce it.
    Rng rng(5489);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = rng.next_u64();
    CHECK(v == 9981545732273789042ULL);
}

TEST_CASE("mix64 avalanches and does not collide on a dense range") {
    // 0 is the one fixed point of the finalizer; derive_seed never feeds it
    // a raw zero because the master seed is xor'ed with a nonzero constant.
    CHECK(cubedac::mix64(0) == 0);
    CHECK(cubedac::mix64(1) != 1);
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 100000; ++i) seen.insert(cubedac::mix64(i));
    CHECK(seen.size() == 100000);
    // flipping one input bit flips roughly half the output bits
    int flips = std::popcount(cubedac::mix64(12345) ^ cubedac::mix64(12345 ^ 1ULL));
    CHECK(flips > 16);
    CHECK(flips < 48);
}

TEST_CASE("uniform01 stays in [0,1) with the right mean") {
    Rng rng(42);
    double lo = 1.0, hi = -1.0;
    cubedac::ExactSum sum;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum.add(u);
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(sum.value() / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal draws pass moment and KS checks") {
    Rng rng(2024);
    std::vector<double> z(1000000);
    for (double& v : z) v = rng.normal();
    const auto m = cubedac::compute_moments(z);
    CHECK(std::fabs(m.mean) < 0.01);
    CHECK(std::fabs(m.sd - 1.0) < 0.01);
    CHECK(std::fabs(m.skewness) < 0.02);
    CHECK(std::fabs(m.excess_kurtosis) < 0.05);
    CHECK(cubedac::ks_statistic_normal(z) < 0.003);
}

TEST_CASE("bernoulli frequency tracks p") {
    Rng rng(7);
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) hits += rng.bernoulli(0.3) ? 1 : 0;
    CHECK(static_cast<double>(hits) / n == doctest::Approx(0.3).epsilon(0.03));
}

TEST_CASE("below respects the bound and is roughly uniform") {
    Rng rng(99);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const std::uint64_t r = rng.below(7);
        REQUIRE(r < 7);
        ++counts[static_cast<std::size_t>(r)];
    }
    for (int c : counts) CHECK(std::fabs(c - 10000.0) < 500.0);
    CHECK(rng.below(1) == 0);
}

TEST_CASE("same seed gives the same stream, including the cached spare") {
    Rng a(31337), b(31337);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.normal() == b.normal());
        if (i % 3 == 0) CHECK(a.next_u64() == b.next_u64());
        if (i % 5 == 0) CHECK(a.uniform(-2.0, 3.0) == b.uniform(-2.0, 3.0));
    }
}
