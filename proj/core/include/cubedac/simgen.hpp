#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "cubedac/estimators.hpp"
#include "cubedac/rng.hpp"

namespace cubedac {

enum class ExampleKind { location, maxscore, valuesearch };

const char* example_name(ExampleKind kind);
ExampleKind example_from_name(std::string_view name);  // throws on unknown

struct SimulationDesign {
    ExampleKind example = ExampleKind::location;
    std::int64_t N = 0;
    int S = 1;
    int reps = 1;
    std::uint64_t master_seed = 0;
    double ci_level = 0.95;
};

struct TruthSpec {
    std::vector<double> theta_true;
};
// location: 0; maxscore: (1.5,-1.5) normalized to the unit circle;
// valuesearch: 2.
TruthSpec default_truth(ExampleKind kind);

// Seed for the (replication, group) cell. Frozen scheme: one mixing pass
// whitens the master seed, a second mixes in the packed pair
// (rep << 32) | group. Injective in (rep, group) for rep, group < 2^32
// because mix64 is a bijection and the pack is exclusive-or'ed in whole.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t rep,
                                 std::uint64_t group) {
    const std::uint64_t whitened = mix64(master_seed ^ 0x9e3779b97f4a7c15ULL);
    return mix64(whitened ^ ((rep << 32) | (group & 0xffffffffULL)));
}

// x ~ N(0,1)
class LocationStream {
public:
    explicit LocationStream(std::uint64_t seed) : rng_(seed) {}
    double next() { return rng_.normal(); }

private:
    Rng rng_;
};

// y = 1.5 x1 - 1.5 x2 + 0.5 e with x1, x2, e independent standard normal
class MaxscoreStream {
public:
    explicit MaxscoreStream(std::uint64_t seed) : rng_(seed) {}
    void next(double& x1, double& x2, double& y) {
        x1 = rng_.normal();
        x2 = rng_.normal();
        y = 1.5 * x1 - 1.5 * x2 + 0.5 * rng_.normal();
    }
    RegressionSample next_sample() {
        RegressionSample s;
        s.x.resize(2);
        next(s.x[0], s.x[1], s.y);
        return s;
    }

private:
    Rng rng_;
};

// y = 1 + a (2x - 1) + e with x ~ N(0,1), P(a=1) = 1/2, e ~ N(0, sd^2),
// pi = 1/2 known. The default noise sd 0.5 reads "N(0, 0.25)" as variance
// 0.25; pass a different sd to override that interpretation.
class ValuesearchStream {
public:
    explicit ValuesearchStream(std::uint64_t seed, double noise_sd = 0.5)
        : rng_(seed), noise_sd_(noise_sd) {}
    TreatmentSample next() {
        TreatmentSample s;
        s.x = rng_.normal();
        s.a = rng_.bernoulli(0.5) ? 1 : 0;
        s.y = 1.0 + s.a * (2.0 * s.x - 1.0) + noise_sd_ * rng_.normal();
        s.pi = 0.5;
        return s;
    }

private:
    Rng rng_;
    double noise_sd_;
};

}  // namespace cubedac
