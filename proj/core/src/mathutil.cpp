#include "cubedac/mathutil.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cubedac {

void ExactSum::add(double x) {
    if (std::isnan(x) || std::isinf(x))
        throw std::invalid_argument("ExactSum: non-finite term");
    // Grow the expansion: after this loop every partial is nonzero,
    // nonoverlapping and sorted by increasing magnitude.
    std::size_t out = 0;
    for (std::size_t i = 0; i < partials_.size(); ++i) {
        double y = partials_[i];
        if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
        const double hi = x + y;
        const double lo = y - (hi - x);
        if (lo != 0.0) partials_[out++] = lo;
        x = hi;
    }
    partials_.resize(out);
    partials_.push_back(x);
}

double ExactSum::value() const {
    // Round the expansion to one double, correcting the half-way case so the
    // result equals the exact real sum rounded to nearest even.
    if (partials_.empty()) return 0.0;
    std::size_t n = partials_.size();
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
        const double x = hi;
        const double y = partials_[--n];
        hi = x + y;
        const double yr = hi - x;
        lo = y - yr;
        if (lo != 0.0) break;
    }
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                  (lo > 0.0 && partials_[n - 1] > 0.0))) {
        const double y = lo * 2.0;
        const double x = hi + y;
        if (y == x - hi) hi = x;
    }
    return hi;
}

double exact_sum(std::span<const double> xs) {
    ExactSum s;
    s.add(xs);
    return s.value();
}

double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n <= 8) {
        double s = 0.0;
        for (double v : xs) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244008444);
}

double normal_quantile(double p) {
    // Wichura, Algorithm AS 241, PPND16.
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: p must lie in (0,1)");
    const double q = p - 0.5;
    double r;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double v;
    if (r <= 5.0) {
        r -= 1.6;
        v = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        v = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -v : v;
}

Moments compute_moments(std::span<const double> xs) {
    Moments m;
    m.n = xs.size();
    if (m.n == 0) {
        m.degenerate = true;
        return m;
    }
    std::vector<double> tmp(xs.begin(), xs.end());
    m.mean = exact_sum(tmp) / static_cast<double>(m.n);
    if (m.n < 2) {
        m.degenerate = true;
        return m;
    }
    ExactSum s2, s3, s4;
    for (double v : xs) {
        const double d = v - m.mean;
        const double d2 = d * d;
        s2.add(d2);
        s3.add(d2 * d);
        s4.add(d2 * d2);
    }
    const double nd = static_cast<double>(m.n);
    const double m2 = s2.value() / nd;
    if (m2 <= 0.0) {
        m.degenerate = true;
        return m;
    }
    m.sd = std::sqrt(s2.value() / (nd - 1.0));
    const double m3 = s3.value() / nd;
    const double m4 = s4.value() / nd;
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return m;
}

double ks_statistic_normal(std::span<const double> xs) {
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = normal_cdf(sorted[i]);
        const double upper = (static_cast<double>(i) + 1.0) / n - f;
        const double lower = f - static_cast<double>(i) / n;
        d = std::max(d, std::max(upper, lower));
    }
    return d;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    ExactSum sx, sy;
    for (double v : x) sx.add(v);
    for (double v : y) sy.add(v);
    const double mx = sx.value() / n;
    const double my = sy.value() / n;
    ExactSum sxx, sxy, syy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx.add(dx * dx);
        sxy.add(dx * dy);
        syy.add(dy * dy);
    }
    const double vxx = sxx.value();
    const double vyy = syy.value();
    if (vxx <= 0.0)
        throw std::invalid_argument("fit_line: x values are all equal");
    LineFit fit;
    fit.slope = sxy.value() / vxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = (vyy > 0.0) ? (sxy.value() * sxy.value()) / (vxx * vyy) : 1.0;
    return fit;
}

}  // namespace cubedac
