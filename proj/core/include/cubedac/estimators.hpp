#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cubedac/sweep.hpp"

namespace cubedac {

struct RegressionSample {
    std::vector<double> x;  // covariates, length d >= 2
    double y;
};

struct TreatmentSample {
    double x;    // scalar baseline covariate
    int a;       // treatment received, 0 or 1
    double y;    // outcome, larger is better
    double pi;   // known propensity P(a=1|x), in (0,1)
};

// ---- location ----
// argmax_t #{i : t-1 <= x_i <= t+1}, i.e. the center of a unit-half-width
// window covering the most points.

SweepResult location_sweep(std::span<const double> xs);
double estimate_location(std::span<const double> xs);

// ---- maximum score ----
// Count of correctly signed predictions under the unit-norm constraint:
// sum_i [ I(y_i >= 0, x_i'b >= 0) + I(y_i < 0, x_i'b < 0) ].

std::int64_t maxscore_objective(std::span<const RegressionSample> data,
                                std::span<const double> beta);

// Exact 2-d solver: the objective is piecewise constant in the angle p of
// b = (cos p, sin p); sweep over the 2n sign-change angles. The flat-array
// overload is the simulation hot path. The sweep result lives in angle space
// [-pi, pi]; representative is the angular midpoint of the first maximal arc.
SweepResult maxscore_angle_sweep(std::span<const double> x1,
                                 std::span<const double> x2,
                                 std::span<const double> y);
SweepResult maxscore_angle_sweep(std::span<const RegressionSample> data);

std::vector<double> estimate_maxscore_2d(std::span<const RegressionSample> data);
void estimate_maxscore_2d(std::span<const double> x1, std::span<const double> x2,
                          std::span<const double> y, double out[2]);

// Heuristic ascent for d >= 3: cyclic exact angle sweeps in the 2-planes
// spanned by the current iterate and the Gram-Schmidt complement of
// beta_init. Monotone in the objective, not guaranteed globally optimal.
std::vector<double> estimate_maxscore_highd(std::span<const RegressionSample> data,
                                            std::span<const double> beta_init,
                                            int max_rounds);

// ---- value search ----
// Inverse-propensity-weighted value of the rule I(x*t > 1); each sample
// contributes c * I(x*t > 1) + base.

struct ValueContrast {
    double c;
    double base;
};
ValueContrast valuesearch_contrast(const TreatmentSample& s);

// Sweep of the SUM objective sum_i c_i * I(x_i * t > 1) over theta_bounds
// (the maximizer is unchanged by the 1/n factor).
SweepResult valuesearch_sweep(std::span<const double> x, std::span<const double> c,
                              Bounds theta_bounds);
SweepResult valuesearch_sweep(std::span<const TreatmentSample> data, Bounds theta_bounds);

inline constexpr Bounds kDefaultValueBounds{-10.0, 10.0};

double estimate_valuesearch_1d(std::span<const TreatmentSample> data,
                               Bounds theta_bounds = kDefaultValueBounds);

// Direct evaluation of the value-search sum objective at a point, with
// exactly rounded accumulation (mirrors the sweep's tie semantics).
double valuesearch_objective(std::span<const double> x, std::span<const double> c,
                             double theta);

}  // namespace cubedac
