#include "cubedac/limitproc.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cubedac/mathutil.hpp"
#include "cubedac/rng.hpp"
#include "doctest.h"

using cubedac::LimitProcessSpec;

namespace {

LimitProcessSpec small_spec(int reps, double step = 0.01, double half_width = 8.0) {
    LimitProcessSpec spec = cubedac::location_limit_spec();
    spec.reps = reps;
    spec.step = step;
    spec.half_width = half_width;
    return spec;
}

}  // namespace

TEST_CASE("location limit spec pins the normal-window design") {
    const LimitProcessSpec spec = cubedac::location_limit_spec();

    // Both the variance slope and the curvature equal 2 phi(1) for this
    // design; they come from the same expression, so equality is exact.
    CHECK(spec.sigma2 == spec.curvature);
    CHECK(spec.sigma2 > 0.4839);
    CHECK(spec.sigma2 < 0.4840);
    CHECK(spec.sigma2 == 2.0 * cubedac::normal_pdf(1.0));

    CHECK(spec.half_width == 8.0);
    CHECK(spec.step == 0.01);
    CHECK(spec.reps == 100000);
    CHECK_NOTHROW(cubedac::validate(spec));
}

TEST_CASE("spec validation rejects each bad field") {
    const LimitProcessSpec good = small_spec(100);
    CHECK_NOTHROW(cubedac::validate(good));

    LimitProcessSpec bad = good;
    bad.sigma2 = 0.0;
    CHECK_THROWS_WITH_AS(cubedac::validate(bad), doctest::Contains("sigma2"),
                         std::invalid_argument);
    bad = good;
    bad.sigma2 = -1.0;
    CHECK_THROWS_AS(cubedac::validate(bad), std::invalid_argument);

    bad = good;
    bad.curvature = 0.0;
    CHECK_THROWS_WITH_AS(cubedac::validate(bad), doctest::Contains("curvature"),
                         std::invalid_argument);

    bad = good;
    bad.half_width = 0.0;
    CHECK_THROWS_WITH_AS(cubedac::validate(bad), doctest::Contains("half_width"),
                         std::invalid_argument);

    // The step has to resolve the window: at most half_width / 100.
    bad = good;
    bad.step = 0.0;
    CHECK_THROWS_WITH_AS(cubedac::validate(bad), doctest::Contains("step"),
                         std::invalid_argument);
    bad = good;
    bad.step = 0.09;  // > 8 / 100
    CHECK_THROWS_AS(cubedac::validate(bad), std::invalid_argument);
    bad = good;
    bad.step = 0.08;  // boundary value is allowed
    CHECK_NOTHROW(cubedac::validate(bad));

    bad = good;
    bad.reps = 0;
    CHECK_THROWS_WITH_AS(cubedac::validate(bad), doctest::Contains("reps"),
                         std::invalid_argument);
}

TEST_CASE("argmax draws are deterministic, on-grid, and thread invariant") {
    const LimitProcessSpec spec = small_spec(3000);
    const std::vector<double> once = cubedac::simulate_argmax(spec, 1);
    const std::vector<double> again = cubedac::simulate_argmax(spec, 1);
    const std::vector<double> wide = cubedac::simulate_argmax(spec, 4);

    REQUIRE(once.size() == 3000);
    CHECK(once == again);
    CHECK(once == wide);

    for (double h : once) {
        CHECK(std::abs(h) <= spec.half_width + 1e-12);
        const double k = h / spec.step;
        CHECK(std::abs(k - std::llround(k)) < 1e-9);
    }
}

TEST_CASE("argmax distribution: centred, symmetric, grid-stable") {
    // Full-scale run; this doubles as the reference draw for the limit
    // variance used elsewhere.
    LimitProcessSpec spec = small_spec(100000);
    const std::vector<double> draws = cubedac::simulate_argmax(spec);
    const cubedac::Moments m = cubedac::compute_moments(draws);

    const double mean_tol = 4.0 * m.sd / std::sqrt(static_cast<double>(draws.size()));
    CHECK(std::abs(m.mean) < mean_tol);
    CHECK(std::abs(m.skewness) < 0.05);

    // Halving the step moves the variance estimate by less than 2%.
    LimitProcessSpec fine = spec;
    fine.step = 0.005;
    const cubedac::Moments mf = cubedac::compute_moments(cubedac::simulate_argmax(fine));
    CHECK(std::abs(mf.sd * mf.sd / (m.sd * m.sd) - 1.0) < 0.02);

    MESSAGE("limit variance at step 0.01: ", m.sd * m.sd, ", at 0.005: ", mf.sd * mf.sd);
}

TEST_CASE("boundary guard fires when the window cannot hold the argmax") {
    // SD(h0) is near 1.04 for the location design, so a window of 1 puts the
    // argmax on the boundary far more often than 0.1%.
    const LimitProcessSpec cramped = small_spec(2000, 0.01, 1.0);
    CHECK_THROWS_WITH_AS(cubedac::simulate_argmax(cramped),
                         doctest::Contains("half-width too small"), std::runtime_error);
}

TEST_CASE("rescaling law: SD of the argmax moves as factor^(2/3)") {
    SUBCASE("factor 1 reproduces the base run exactly") {
        const cubedac::ScalingReport r = cubedac::scaling_law_check(small_spec(4000), 1.0);
        CHECK(r.empirical_ratio == 1.0);
        CHECK(r.theoretical_ratio == 1.0);
        CHECK(r.sd_base == r.sd_scaled);
    }

    SUBCASE("factor 8 on a wide window") {
        // Scaling the noise by 8 scales the argmax by about 4, so the window
        // must be wide enough for the scaled process to stay interior.
        const cubedac::ScalingReport r =
            cubedac::scaling_law_check(small_spec(20000, 0.02, 24.0), 8.0);
        CHECK(r.theoretical_ratio == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(std::abs(r.empirical_ratio / 4.0 - 1.0) < 0.05);
    }

    SUBCASE("factor 1/8 shrinks by the same law") {
        const cubedac::ScalingReport r = cubedac::scaling_law_check(small_spec(20000), 0.125);
        CHECK(std::abs(r.empirical_ratio / 0.25 - 1.0) < 0.05);
    }

    SUBCASE("bad factor") {
        CHECK_THROWS_AS(cubedac::scaling_law_check(small_spec(100), 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("limit variance estimator") {
    SUBCASE("constant input has variance zero") {
        const std::vector<double> flat(15000, 3.25);
        const cubedac::VarianceEstimate est = cubedac::estimate_limit_variance(flat);
        CHECK(est.variance == 0.0);
        CHECK(est.jackknife_se == 0.0);
        CHECK(est.n == 15000);
    }

    SUBCASE("rejects short samples") {
        const std::vector<double> few(9999, 0.0);
        CHECK_THROWS_WITH_AS(cubedac::estimate_limit_variance(few),
                             doctest::Contains("1e4"), std::invalid_argument);
    }

    SUBCASE("standard normal draws recover unit variance") {
        cubedac::Rng rng(2024);
        std::vector<double> z(1000000);
        for (double& v : z) v = rng.normal();
        const cubedac::VarianceEstimate est = cubedac::estimate_limit_variance(z);
        CHECK(std::abs(est.variance - 1.0) < 0.01);
        // Var(s^2) = 2 sigma^4 / (n-1) for normal data, so the jackknife SE
        // should sit near sqrt(2)/1000.
        CHECK(est.jackknife_se > 0.0012);
        CHECK(est.jackknife_se < 0.0017);
    }

    SUBCASE("agrees with the moment summary on argmax draws") {
        const std::vector<double> draws = cubedac::simulate_argmax(small_spec(20000));
        const cubedac::VarianceEstimate est = cubedac::estimate_limit_variance(draws);
        const cubedac::Moments m = cubedac::compute_moments(draws);
        CHECK(est.variance == doctest::Approx(m.sd * m.sd).epsilon(1e-12));
        CHECK(est.jackknife_se > 0.0);
        CHECK(est.jackknife_se < 0.1);
    }
}
