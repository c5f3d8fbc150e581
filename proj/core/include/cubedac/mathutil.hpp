#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cubedac {

// Exactly rounded accumulation of doubles via a nonoverlapping expansion
// (Shewchuk's growing-expansion scheme, same idea as Python's math.fsum).
// The returned value is the true real sum rounded once to double, so it does
// not depend on the order in which terms were added.
class ExactSum {
public:
    void add(double x);
    void add(std::span<const double> xs) {
        for (double v : xs) add(v);
    }
    // Rounded value of the accumulated sum. Does not reset the accumulator.
    double value() const;
    void reset() { partials_.clear(); }

private:
    std::vector<double> partials_;  // nonoverlapping, increasing magnitude
};

double exact_sum(std::span<const double> xs);

// Pairwise (cascade) summation. Not exact, but error grows like O(log n)
// and the result is deterministic for a fixed input order.
double pairwise_sum(std::span<const double> xs);

double normal_pdf(double x);
double normal_cdf(double x);

// Inverse of the standard normal CDF (Wichura's PPND16 rational
// approximation, accurate to ~1e-15). Throws std::domain_error outside (0,1).
double normal_quantile(double p);

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;        // sample SD, divisor n-1
    double skewness = 0.0;  // m3 / m2^(3/2), population-style moments
    double excess_kurtosis = 0.0;
    bool degenerate = false;  // all values equal (or n < 2)
};
Moments compute_moments(std::span<const double> xs);

// One-sample Kolmogorov-Smirnov distance between the empirical CDF of xs and
// the standard normal CDF. xs need not be sorted.
double ks_statistic_normal(std::span<const double> xs);

// Ordinary least squares fit y = a + b x; returns slope b and R^2.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace cubedac
