#include "cubedac/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cubedac/mathutil.hpp"

namespace cubedac {

namespace {

constexpr double kPi = std::numbers::pi;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void require_unit(std::span<const double> beta) {
    if (std::fabs(norm2(beta) - 1.0) > 1e-9)
        throw std::invalid_argument("beta must be a unit vector");
}

// Append a circular arc, given by raw angles lo <= hi with hi - lo < 2*pi,
// as intervals inside the linear angle domain [-pi, pi]. Arcs that cross the
// boundary are split; arcs that touch it exactly get a mirrored degenerate
// point so the step function agrees at the identified angles -pi and +pi.
void add_circle_arc(std::vector<WeightedInterval>& out, double lo, double hi,
                    bool lo_closed, bool hi_closed, double w) {
    const double k = std::floor((lo + kPi) / (2.0 * kPi));
    lo -= 2.0 * kPi * k;
    hi -= 2.0 * kPi * k;
    if (hi <= kPi) {
        out.push_back({lo, hi, w, lo_closed, hi_closed});
        if (lo == -kPi && lo_closed) out.push_back({kPi, kPi, w, true, true});
        if (hi == kPi && hi_closed) out.push_back({-kPi, -kPi, w, true, true});
    } else {
        // wraps: [lo, pi] plus [-pi, hi - 2pi]; the cut points are interior
        // to the arc, hence closed on both new ends
        out.push_back({lo, kPi, w, lo_closed, true});
        out.push_back({-kPi, hi - 2.0 * kPi, w, true, hi_closed});
    }
}

}  // namespace

SweepResult location_sweep(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("location: empty data");
    double lo = xs[0], hi = xs[0];
    for (double v : xs) {
        if (!std::isfinite(v)) throw std::invalid_argument("location: non-finite value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<WeightedInterval> intervals;
    intervals.reserve(xs.size());
    for (double v : xs) intervals.push_back({v - 1.0, v + 1.0, 1.0, true, true});
    return sweep_max(intervals, Bounds{lo - 1.0, hi + 1.0});
}

double estimate_location(std::span<const double> xs) {
    return location_sweep(xs).representative;
}

std::int64_t maxscore_objective(std::span<const RegressionSample> data,
                                std::span<const double> beta) {
    require_unit(beta);
    std::int64_t count = 0;
    for (const RegressionSample& s : data) {
        const double xb = dot(s.x, beta);
        if (s.y >= 0.0 ? xb >= 0.0 : xb < 0.0) ++count;
    }
    return count;
}

SweepResult maxscore_angle_sweep(std::span<const double> x1, std::span<const double> x2,
                                 std::span<const double> y) {
    if (x1.empty() || x1.size() != x2.size() || x1.size() != y.size())
        throw std::invalid_argument("maxscore: empty or ragged data");
    std::vector<WeightedInterval> arcs;
    arcs.reserve(2 * x1.size());
    for (std::size_t i = 0; i < x1.size(); ++i) {
        if (x1[i] == 0.0 && x2[i] == 0.0) continue;  // constant contribution
        const double alpha = std::atan2(x2[i], x1[i]);
        if (y[i] >= 0.0) {
            // x'b >= 0 on the closed half-circle centered at alpha
            add_circle_arc(arcs, alpha - 0.5 * kPi, alpha + 0.5 * kPi, true, true, 1.0);
        } else {
            // x'b < 0 on the open complement
            add_circle_arc(arcs, alpha + 0.5 * kPi, alpha + 1.5 * kPi, false, false, 1.0);
        }
    }
    return sweep_max(arcs, Bounds{-kPi, kPi});
}

SweepResult maxscore_angle_sweep(std::span<const RegressionSample> data) {
    std::vector<double> x1(data.size()), x2(data.size()), y(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].x.size() != 2)
            throw std::invalid_argument("maxscore 2d: samples must have d = 2");
        x1[i] = data[i].x[0];
        x2[i] = data[i].x[1];
        y[i] = data[i].y;
    }
    return maxscore_angle_sweep(x1, x2, y);
}

void estimate_maxscore_2d(std::span<const double> x1, std::span<const double> x2,
                          std::span<const double> y, double out[2]) {
    const SweepResult sweep = maxscore_angle_sweep(x1, x2, y);
    const double phi = sweep.representative;
    double b1 = std::cos(phi), b2 = std::sin(phi);
    const double nrm = std::hypot(b1, b2);
    out[0] = b1 / nrm;
    out[1] = b2 / nrm;
}

std::vector<double> estimate_maxscore_2d(std::span<const RegressionSample> data) {
    const SweepResult sweep = maxscore_angle_sweep(data);
    const double phi = sweep.representative;
    double b1 = std::cos(phi), b2 = std::sin(phi);
    const double nrm = std::hypot(b1, b2);
    return {b1 / nrm, b2 / nrm};
}

std::vector<double> estimate_maxscore_highd(std::span<const RegressionSample> data,
                                            std::span<const double> beta_init,
                                            int max_rounds) {
    if (data.empty()) throw std::invalid_argument("maxscore: empty data");
    const std::size_t d = beta_init.size();
    if (d < 3)
        throw std::invalid_argument("maxscore high-d needs d >= 3; use estimate_maxscore_2d");
    if (max_rounds < 1) throw std::invalid_argument("maxscore: max_rounds must be >= 1");
    for (const RegressionSample& s : data)
        if (s.x.size() != d) throw std::invalid_argument("maxscore: ragged data");
    require_unit(beta_init);

    // Orthonormal complement of beta_init by Gram-Schmidt over the
    // coordinate basis.
    std::vector<std::vector<double>> U;
    for (std::size_t e = 0; e < d && U.size() + 1 < d; ++e) {
        std::vector<double> v(d, 0.0);
        v[e] = 1.0;
        const double pb = dot(v, beta_init);
        for (std::size_t i = 0; i < d; ++i) v[i] -= pb * beta_init[i];
        for (const auto& u : U) {
            const double pu = dot(v, u);
            for (std::size_t i = 0; i < d; ++i) v[i] -= pu * u[i];
        }
        const double nv = norm2(v);
        if (nv < 1e-8) continue;
        for (double& vi : v) vi /= nv;
        U.push_back(std::move(v));
    }

    std::vector<double> best(beta_init.begin(), beta_init.end());
    std::int64_t best_obj = maxscore_objective(data, best);

    std::vector<double> p1(data.size()), p2(data.size()), ys(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) ys[i] = data[i].y;

    for (int round = 0; round < max_rounds; ++round) {
        bool improved = false;
        for (const auto& u : U) {
            // Frame of the 2-plane span(best, u): v2 = u orthogonalized
            // against the current iterate.
            std::vector<double> v2(u);
            const double pb = dot(v2, best);
            for (std::size_t i = 0; i < d; ++i) v2[i] -= pb * best[i];
            const double nv = norm2(v2);
            if (nv < 1e-10) continue;
            for (double& vi : v2) vi /= nv;

            for (std::size_t i = 0; i < data.size(); ++i) {
                p1[i] = dot(data[i].x, best);
                p2[i] = dot(data[i].x, v2);
            }
            const SweepResult sweep = maxscore_angle_sweep(p1, p2, ys);
            const double phi = sweep.representative;
            std::vector<double> cand(d);
            const double c = std::cos(phi), s = std::sin(phi);
            for (std::size_t i = 0; i < d; ++i) cand[i] = c * best[i] + s * v2[i];
            const double nc = norm2(cand);
            for (double& ci : cand) ci /= nc;

            const std::int64_t obj = maxscore_objective(data, cand);
            if (obj > best_obj) {
                best = std::move(cand);
                best_obj = obj;
                improved = true;
            }
        }
        if (!improved) break;
    }
    return best;
}

ValueContrast valuesearch_contrast(const TreatmentSample& s) {
    if (!(s.pi > 0.0 && s.pi < 1.0))
        throw std::invalid_argument("valuesearch: pi outside (0,1)");
    if (s.a != 0 && s.a != 1)
        throw std::invalid_argument("valuesearch: treatment must be 0 or 1");
    const double a = static_cast<double>(s.a);
    const double base = ((1.0 - a) / (1.0 - s.pi)) * s.y;
    const double c = (a / s.pi) * s.y - base;
    return {c, base};
}

SweepResult valuesearch_sweep(std::span<const double> x, std::span<const double> c,
                              Bounds theta_bounds) {
    if (x.empty() || x.size() != c.size())
        throw std::invalid_argument("valuesearch: empty or ragged data");
    std::vector<WeightedInterval> intervals;
    intervals.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0 || c[i] == 0.0) continue;
        const double b = 1.0 / x[i];
        if (x[i] > 0.0) {
            // x*t > 1  <=>  t > 1/x
            if (b >= theta_bounds.hi) continue;
            intervals.push_back({b, theta_bounds.hi, c[i], false, true});
        } else {
            // x*t > 1  <=>  t < 1/x
            if (b <= theta_bounds.lo) continue;
            intervals.push_back({theta_bounds.lo, b, c[i], true, false});
        }
    }
    return sweep_max(intervals, theta_bounds);
}

SweepResult valuesearch_sweep(std::span<const TreatmentSample> data, Bounds theta_bounds) {
    std::vector<double> x(data.size()), c(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        x[i] = data[i].x;
        c[i] = valuesearch_contrast(data[i]).c;
    }
    return valuesearch_sweep(x, c, theta_bounds);
}

double estimate_valuesearch_1d(std::span<const TreatmentSample> data, Bounds theta_bounds) {
    if (data.empty()) throw std::invalid_argument("valuesearch: empty data");
    return valuesearch_sweep(data, theta_bounds).representative;
}

double valuesearch_objective(std::span<const double> x, std::span<const double> c,
                             double theta) {
    ExactSum sum;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) continue;
        const double b = 1.0 / x[i];
        const bool in = (x[i] > 0.0) ? (theta > b) : (theta < b);
        if (in) sum.add(c[i]);
    }
    return sum.value();
}

}  // namespace cubedac
