#pragma once

#include <span>
#include <vector>

namespace cubedac {

// One weighted indicator summand w * I(lo <= t <= hi). Endpoint flags allow
// half-open variants; a degenerate interval (lo == hi) must be closed-closed.
struct WeightedInterval {
    double lo;
    double hi;
    double weight;
    bool lo_closed = true;
    bool hi_closed = true;
};

struct Bounds {
    double lo;
    double hi;
};

// A maximal connected piece of the maximizing set of the step function.
struct MaximizerInterval {
    double lo;
    double hi;
    bool lo_closed;
    bool hi_closed;

    bool contains(double t) const {
        if (t < lo || t > hi) return false;
        if (t == lo && !lo_closed) return false;
        if (t == hi && !hi_closed) return false;
        return true;
    }
};

struct SweepResult {
    double max_value = 0.0;
    // Disjoint, ascending, non-empty pieces where the step function attains
    // max_value exactly.
    std::vector<MaximizerInterval> maximizing_set;
    // Midpoint of the first piece (the point itself when degenerate).
    double representative = 0.0;
};

// Exact global maximization of f(t) = sum_i w_i * I(lo_i <= t <= hi_i) over
// the closed domain [bounds.lo, bounds.hi]. Intervals are clipped to the
// domain; endpoints closer than 1e-12 are treated as one breakpoint. Weight
// accumulation uses exactly rounded summation, so max_value equals the true
// sum of the active weights rounded once, independent of input order.
//
// Throws std::invalid_argument with "empty-domain" when bounds are inverted
// and "non-finite-input" on NaN/inf weights or endpoints.
SweepResult sweep_max(std::span<const WeightedInterval> intervals, Bounds bounds);

}  // namespace cubedac
