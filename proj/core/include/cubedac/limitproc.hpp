#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cubedac {

// Parameters of the limiting drift-plus-noise process
// Z(h) = G(h) - V h^2 / 2, where G is a two-sided Brownian motion with
// Var G(h) = sigma2 * |h|. The argmax of Z over |h| <= half_width,
// discretized with the given step, is the object of study: its variance is
// the asymptotic variance of the rescaled group estimates.
struct LimitProcessSpec {
    double sigma2 = 0.0;
    double curvature = 0.0;  // V
    double half_width = 0.0;
    double step = 0.0;
    int reps = 0;
    std::uint64_t seed = 0;
};

void validate(const LimitProcessSpec& spec);  // throws std::invalid_argument

// Location design on standard normal data: sigma2 = V = 2 phi(1), evaluated
// from the density at runtime. T = 8, step 0.01, 1e5 reps by default.
LimitProcessSpec location_limit_spec();

// One argmax draw per replication. Ties go to the smallest |h|; an argmax
// landing on the boundary in more than 0.1% of replications throws
// "half-width too small".
std::vector<double> simulate_argmax(const LimitProcessSpec& spec, int threads = 0);

struct ScalingReport {
    double sd_base = 0.0;
    double sd_scaled = 0.0;
    double empirical_ratio = 0.0;    // sd_scaled / sd_base
    double theoretical_ratio = 0.0;  // factor^(2/3)
};
// Compares argmax spread between spec and spec with the Gaussian component
// scaled by factor (same seed stream for both). SD(h0) should move by
// factor^(2/3): argmax(a W - b h^2) ~ (a/b)^(2/3) argmax(W - h^2).
ScalingReport scaling_law_check(const LimitProcessSpec& spec, double factor,
                                int threads = 0);

struct VarianceEstimate {
    double variance = 0.0;
    double jackknife_se = 0.0;
    std::int64_t n = 0;
};
// Sample variance with a jackknife standard error. Requires >= 1e4 samples.
VarianceEstimate estimate_limit_variance(std::span<const double> samples);

}  // namespace cubedac
