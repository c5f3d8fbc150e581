#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubedac/rng.hpp"
#include "cubedac/sweep.hpp"
#include "oracles.hpp"

using cubedac::Bounds;
using cubedac::sweep_max;
using cubedac::SweepResult;
using cubedac::WeightedInterval;

namespace {

std::vector<WeightedInterval> random_instance(std::uint64_t seed, bool with_flags) {
    cubedac::Rng rng(seed);
    const int n = 1 + static_cast<int>(rng.below(40));
    std::vector<WeightedInterval> ivs;
    for (int i = 0; i < n; ++i) {
        double a = rng.uniform(-2.0, 2.0);
        double b = rng.uniform(-2.0, 2.0);
        if (a > b) std::swap(a, b);
        WeightedInterval iv{a, b, 0.0, true, true};
        switch (rng.below(4)) {
            case 0: iv.weight = 1.0; break;
            case 1: iv.weight = -1.0; break;
            default: iv.weight = rng.uniform(-1.0, 1.0); break;
        }
        if (iv.weight == 0.0) iv.weight = 0.5;
        if (with_flags && a < b) {
            iv.lo_closed = rng.bernoulli(0.5);
            iv.hi_closed = rng.bernoulli(0.5);
        }
        ivs.push_back(iv);
    }
    return ivs;
}

}  // namespace

TEST_CASE("single unit interval") {
    std::vector<WeightedInterval> ivs{{-1.0, 1.0, 1.0}};
    const auto r = sweep_max(ivs, {-10.0, 10.0});
    CHECK(r.max_value == 1.0);
    REQUIRE(r.maximizing_set.size() == 1);
    CHECK(r.maximizing_set[0].lo == -1.0);
    CHECK(r.maximizing_set[0].hi == 1.0);
    CHECK(r.maximizing_set[0].lo_closed);
    CHECK(r.maximizing_set[0].hi_closed);
    CHECK(r.representative == 0.0);
}

TEST_CASE("three overlapping unit-weight intervals") {
    std::vector<WeightedInterval> ivs{
        {-1.5, 0.5, 1.0}, {-0.8, 1.2, 1.0}, {2.0, 4.0, 1.0}};
    const auto r = sweep_max(ivs, {-10.0, 10.0});
    CHECK(r.max_value == 2.0);
    REQUIRE(r.maximizing_set.size() == 1);
    CHECK(r.maximizing_set[0].lo == -0.8);
    CHECK(r.maximizing_set[0].hi == 0.5);
    // -0.15 up to the rounding of the endpoint sum (one ulp off the literal)
    CHECK(r.representative == 0.5 * (-0.8 + 0.5));
    CHECK(r.representative == doctest::Approx(-0.15).epsilon(1e-15));
}

TEST_CASE("negative weight carves a right-open maximizer") {
    std::vector<WeightedInterval> ivs{{0.0, 2.0, 2.0}, {1.0, 3.0, -1.0}};
    const auto r = sweep_max(ivs, {-5.0, 5.0});
    CHECK(r.max_value == 2.0);
    REQUIRE(r.maximizing_set.size() == 1);
    CHECK(r.maximizing_set[0].lo == 0.0);
    CHECK(r.maximizing_set[0].lo_closed);
    CHECK(r.maximizing_set[0].hi == 1.0);
    CHECK_FALSE(r.maximizing_set[0].hi_closed);
    CHECK(r.representative == 0.5);
}

TEST_CASE("agrees exactly with the brute-force oracle on random instances") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const bool with_flags = seed % 2 == 0;
        const auto ivs = random_instance(seed, with_flags);
        const Bounds bounds = (seed % 3 == 0) ? Bounds{-1.0, 1.0} : Bounds{-3.0, 3.0};
        const auto r = sweep_max(ivs, bounds);

        CAPTURE(seed);
        CHECK(r.max_value == oracle::step_brute_max(ivs, bounds));
        CHECK(oracle::step_eval(ivs, r.representative) == r.max_value);
        REQUIRE(!r.maximizing_set.empty());
        for (const auto& piece : r.maximizing_set) {
            CHECK(piece.contains(r.representative) ==
                  (&piece == &r.maximizing_set.front()));
            const double inner =
                piece.lo == piece.hi ? piece.lo : 0.5 * (piece.lo + piece.hi);
            CHECK(oracle::step_eval(ivs, inner) == r.max_value);
        }
        // pieces are disjoint and ascending
        for (std::size_t i = 1; i < r.maximizing_set.size(); ++i)
            CHECK(r.maximizing_set[i - 1].hi <= r.maximizing_set[i].lo);
    }
}

TEST_CASE("input order never changes the result") {
    auto ivs = random_instance(424242, true);
    const Bounds bounds{-3.0, 3.0};
    const auto base = sweep_max(ivs, bounds);
    std::mt19937_64 g(17);
    for (int trial = 0; trial < 30; ++trial) {
        for (std::size_t i = ivs.size(); i > 1; --i)
            std::swap(ivs[i - 1], ivs[g() % i]);
        const auto r = sweep_max(ivs, bounds);
        CHECK(r.max_value == base.max_value);
        CHECK(r.representative == base.representative);
        REQUIRE(r.maximizing_set.size() == base.maximizing_set.size());
        for (std::size_t i = 0; i < r.maximizing_set.size(); ++i) {
            CHECK(r.maximizing_set[i].lo == base.maximizing_set[i].lo);
            CHECK(r.maximizing_set[i].hi == base.maximizing_set[i].hi);
            CHECK(r.maximizing_set[i].lo_closed == base.maximizing_set[i].lo_closed);
            CHECK(r.maximizing_set[i].hi_closed == base.maximizing_set[i].hi_closed);
        }
    }
}

TEST_CASE("ties are decided by the exactly rounded sums") {
    // 0.1 + 0.2 on both regions: identical weight multisets tie bit-for-bit.
    std::vector<WeightedInterval> tie{{0.0, 1.0, 0.1},
                                      {0.0, 1.0, 0.2},
                                      {2.0, 3.0, 0.2},
                                      {2.0, 3.0, 0.1}};
    auto r = sweep_max(tie, {-1.0, 4.0});
    REQUIRE(r.maximizing_set.size() == 2);
    CHECK(r.maximizing_set[0].lo == 0.0);
    CHECK(r.maximizing_set[1].lo == 2.0);
    CHECK(r.representative == 0.5);

    // 0.1 + 0.2 > 0.3 in doubles, so the left region must win alone.
    std::vector<WeightedInterval> no_tie{{0.0, 1.0, 0.1},
                                         {0.0, 1.0, 0.2},
                                         {2.0, 3.0, 0.3}};
    r = sweep_max(no_tie, {-1.0, 4.0});
    CHECK(r.max_value == 0.1 + 0.2);
    CHECK(r.max_value > 0.3);
    REQUIRE(r.maximizing_set.size() == 1);
    CHECK(r.maximizing_set[0].hi == 1.0);
}

TEST_CASE("endpoints within 1e-12 merge into one breakpoint") {
    std::vector<WeightedInterval> ivs{{0.0, 1.0, 1.0}, {1.0 + 1e-13, 2.0, 1.0}};
    const auto r = sweep_max(ivs, {-1.0, 3.0});
    CHECK(r.max_value == 2.0);
    REQUIRE(r.maximizing_set.size() == 1);
    CHECK(r.maximizing_set[0].lo == 1.0);  // cluster representative: first member
    CHECK(r.maximizing_set[0].hi == 1.0);
    CHECK(r.representative == 1.0);
}

TEST_CASE("degenerate point interval participates") {
    std::vector<WeightedInterval> ivs{{0.5, 0.5, 3.0}, {0.0, 1.0, 1.0}};
    const auto r = sweep_max(ivs, {0.0, 1.0});
    CHECK(r.max_value == 4.0);
    REQUIRE(r.maximizing_set.size() == 1);
    CHECK(r.maximizing_set[0].lo == 0.5);
    CHECK(r.maximizing_set[0].hi == 0.5);
    CHECK(r.representative == 0.5);
}

TEST_CASE("open endpoints are excluded from the maximizing set") {
    std::vector<WeightedInterval> ivs{{0.0, 1.0, 1.0, false, false}};
    const auto r = sweep_max(ivs, {0.0, 1.0});
    CHECK(r.max_value == 1.0);
    REQUIRE(r.maximizing_set.size() == 1);
    CHECK_FALSE(r.maximizing_set[0].lo_closed);
    CHECK_FALSE(r.maximizing_set[0].hi_closed);
    CHECK_FALSE(r.maximizing_set[0].contains(0.0));
    CHECK_FALSE(r.maximizing_set[0].contains(1.0));
    CHECK(r.maximizing_set[0].contains(0.5));
    CHECK(r.representative == 0.5);
}

TEST_CASE("intervals outside the domain leave a flat zero maximum") {
    std::vector<WeightedInterval> ivs{{5.0, 6.0, 1.0}, {-8.0, -7.0, 2.0}};
    const auto r = sweep_max(ivs, {-1.0, 1.0});
    CHECK(r.max_value == 0.0);
    REQUIRE(r.maximizing_set.size() == 1);
    CHECK(r.maximizing_set[0].lo == -1.0);
    CHECK(r.maximizing_set[0].hi == 1.0);
    CHECK(r.representative == 0.0);
}

TEST_CASE("purely negative weights push the maximum outside their support") {
    std::vector<WeightedInterval> ivs{{0.0, 1.0, -1.0}};
    const auto r = sweep_max(ivs, {-2.0, 2.0});
    CHECK(r.max_value == 0.0);
    REQUIRE(r.maximizing_set.size() == 2);
    CHECK(r.maximizing_set[0].lo == -2.0);
    CHECK(r.maximizing_set[0].lo_closed);
    CHECK(r.maximizing_set[0].hi == 0.0);
    CHECK_FALSE(r.maximizing_set[0].hi_closed);
    CHECK(r.maximizing_set[1].lo == 1.0);
    CHECK_FALSE(r.maximizing_set[1].lo_closed);
    CHECK(r.maximizing_set[1].hi == 2.0);
    CHECK(r.maximizing_set[1].hi_closed);
    CHECK(r.representative == -1.0);
}

TEST_CASE("zero-weight intervals change nothing") {
    std::vector<WeightedInterval> with{{0.0, 1.0, 1.0}, {-0.3, 0.4, 0.0}};
    std::vector<WeightedInterval> without{{0.0, 1.0, 1.0}};
    const auto a = sweep_max(with, {-2.0, 2.0});
    const auto b = sweep_max(without, {-2.0, 2.0});
    CHECK(a.max_value == b.max_value);
    CHECK(a.representative == b.representative);
    CHECK(a.maximizing_set.size() == b.maximizing_set.size());
}

TEST_CASE("error reporting") {
    std::vector<WeightedInterval> ok{{0.0, 1.0, 1.0}};
    CHECK_THROWS_WITH_AS(sweep_max(ok, {1.0, -1.0}),
                         doctest::Contains("empty-domain"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(sweep_max(ok, {2.0, 2.0}),
                         doctest::Contains("empty-domain"), std::invalid_argument);

    std::vector<WeightedInterval> nan_w{{0.0, 1.0, std::nan("")}};
    CHECK_THROWS_WITH_AS(sweep_max(nan_w, {-1.0, 1.0}),
                         doctest::Contains("non-finite-input"), std::invalid_argument);
    std::vector<WeightedInterval> inf_e{
        {0.0, std::numeric_limits<double>::infinity(), 1.0}};
    CHECK_THROWS_WITH_AS(sweep_max(inf_e, {-1.0, 1.0}),
                         doctest::Contains("non-finite-input"), std::invalid_argument);
    std::vector<WeightedInterval> nan_b{{0.0, 1.0, 1.0}};
    CHECK_THROWS_WITH_AS(sweep_max(nan_b, {std::nan(""), 1.0}),
                         doctest::Contains("non-finite-input"), std::invalid_argument);

    std::vector<WeightedInterval> inverted{{1.0, 0.0, 1.0}};
    CHECK_THROWS_AS(sweep_max(inverted, {-1.0, 2.0}), std::invalid_argument);
    std::vector<WeightedInterval> open_pt{{0.5, 0.5, 1.0, false, true}};
    CHECK_THROWS_AS(sweep_max(open_pt, {-1.0, 2.0}), std::invalid_argument);
}
