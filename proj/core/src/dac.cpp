#include "cubedac/dac.hpp"

#include <cmath>
#include <stdexcept>

#include "cubedac/mathutil.hpp"
#include "cubedac/parallel.hpp"

namespace cubedac {

PartitionPlan partition(std::int64_t N, int S) {
    if (S < 1) throw std::invalid_argument("partition: S must be >= 1");
    if (N < S) throw std::invalid_argument("partition: N must be >= S");
    PartitionPlan plan;
    plan.groups = S;
    plan.group_size = N / S;
    plan.discarded = N - plan.group_size * S;
    if (plan.discarded > 0)
        plan.warning = std::to_string(plan.discarded) + " observations discarded";
    return plan;
}

namespace {

std::size_t common_dim(std::span<const GroupEstimate> estimates) {
    if (estimates.empty()) throw std::invalid_argument("no group estimates");
    const std::size_t d = estimates.front().theta.size();
    for (const GroupEstimate& e : estimates)
        if (e.theta.size() != d)
            throw std::invalid_argument("group estimates have mismatched dimensions");
    return d;
}

}  // namespace

std::vector<double> aggregate(std::span<const GroupEstimate> estimates) {
    const std::size_t d = common_dim(estimates);
    const double S = static_cast<double>(estimates.size());
    std::vector<double> mean(d);
    std::vector<double> column(estimates.size());
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t j = 0; j < estimates.size(); ++j) column[j] = estimates[j].theta[k];
        mean[k] = pairwise_sum(column) / S;
    }
    return mean;
}

SeEstimate se_hat(std::span<const GroupEstimate> estimates) {
    const std::size_t d = common_dim(estimates);
    const std::size_t S = estimates.size();
    if (S < 2) throw std::invalid_argument("need at least two groups for SE");

    std::vector<double> mean(d);
    for (std::size_t k = 0; k < d; ++k) {
        ExactSum sum;
        for (const GroupEstimate& e : estimates) sum.add(e.theta[k]);
        mean[k] = sum.value() / static_cast<double>(S);
    }

    SeEstimate out;
    out.cov.assign(d, std::vector<double>(d, 0.0));
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = j; k < d; ++k) {
            ExactSum sum;
            for (const GroupEstimate& e : estimates)
                sum.add((e.theta[j] - mean[j]) * (e.theta[k] - mean[k]));
            const double v = sum.value() / static_cast<double>(S - 1);
            out.cov[j][k] = v;
            out.cov[k][j] = v;
        }
    }
    out.se.resize(d);
    for (std::size_t k = 0; k < d; ++k)
        out.se[k] = std::sqrt(out.cov[k][k] / static_cast<double>(S));
    return out;
}

std::vector<std::pair<double, double>> wald_ci(std::span<const double> theta0,
                                               std::span<const double> se, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("wald_ci: level must lie in (0,1)");
    if (theta0.size() != se.size())
        throw std::invalid_argument("wald_ci: dimension mismatch");
    const double z = normal_quantile(0.5 * (1.0 + level));
    std::vector<std::pair<double, double>> ci;
    ci.reserve(theta0.size());
    for (std::size_t k = 0; k < theta0.size(); ++k)
        ci.emplace_back(theta0[k] - z * se[k], theta0[k] + z * se[k]);
    return ci;
}

TruncationDiagnostic truncation_diagnostic(std::span<const GroupEstimate> estimates,
                                           std::int64_t n, std::span<const double> center,
                                           double c1) {
    if (n < 2) throw std::invalid_argument("truncation_diagnostic: n must be >= 2");
    if (c1 <= 0.0) throw std::invalid_argument("truncation_diagnostic: c1 must be > 0");
    const std::size_t d = common_dim(estimates);

    std::vector<double> c;
    if (center.empty()) {
        c = aggregate(estimates);
    } else {
        if (center.size() != d)
            throw std::invalid_argument("truncation_diagnostic: center dimension mismatch");
        c.assign(center.begin(), center.end());
    }

    TruncationDiagnostic diag;
    const double nd = static_cast<double>(n);
    diag.delta_n = std::cbrt(std::max(3.0, 3.0 / c1) * std::log(nd));
    const double scale = std::cbrt(nd);
    for (const GroupEstimate& e : estimates) {
        double ss = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double dev = scale * (e.theta[k] - c[k]);
            ss += dev * dev;
        }
        if (std::sqrt(ss) > diag.delta_n) ++diag.exceed_count;
    }
    return diag;
}

AggregateReport build_report(std::span<const GroupEstimate> estimates, std::int64_t n,
                             double ci_level) {
    AggregateReport rep;
    rep.theta0 = aggregate(estimates);
    const SeEstimate se = se_hat(estimates);
    rep.se = se.se;
    rep.cov = se.cov;
    rep.ci = wald_ci(rep.theta0, rep.se, ci_level);
    rep.S = static_cast<int>(estimates.size());
    rep.n = n;
    const TruncationDiagnostic diag = truncation_diagnostic(estimates, n);
    rep.delta_n = diag.delta_n;
    rep.truncation_exceed_count = diag.exceed_count;
    return rep;
}

std::vector<GroupEstimate> run_groups_with(int S,
                                           const std::function<GroupEstimate(int)>& fn,
                                           int threads) {
    if (S < 1) throw std::invalid_argument("run_groups: S must be >= 1");
    std::vector<GroupEstimate> out(static_cast<std::size_t>(S));
    parallel_for(S, threads, [&](std::int64_t j) {
        GroupEstimate e = fn(static_cast<int>(j));
        e.group_index = static_cast<int>(j);
        out[static_cast<std::size_t>(j)] = std::move(e);
    });
    return out;
}

namespace {

GroupEstimate estimate_one_group(ExampleKind kind, std::uint64_t seed, std::int64_t n,
                                 const RunOptions& opt) {
    GroupEstimate e;
    e.group_size = n;
    const std::size_t un = static_cast<std::size_t>(n);
    switch (kind) {
        case ExampleKind::location: {
            LocationStream stream(seed);
            std::vector<double> xs(un);
            for (double& v : xs) v = stream.next();
            const SweepResult sweep = location_sweep(xs);
            e.theta = {sweep.representative};
            e.objective_value = sweep.max_value / static_cast<double>(n);
            break;
        }
        case ExampleKind::maxscore: {
            MaxscoreStream stream(seed);
            std::vector<double> x1(un), x2(un), y(un);
            for (std::size_t i = 0; i < un; ++i) stream.next(x1[i], x2[i], y[i]);
            const SweepResult sweep = maxscore_angle_sweep(x1, x2, y);
            const double phi = sweep.representative;
            const double nrm = std::hypot(std::cos(phi), std::sin(phi));
            e.theta = {std::cos(phi) / nrm, std::sin(phi) / nrm};
            e.objective_value = sweep.max_value / static_cast<double>(n);
            break;
        }
        case ExampleKind::valuesearch: {
            ValuesearchStream stream(seed, opt.value_noise_sd);
            std::vector<double> x(un), c(un);
            for (std::size_t i = 0; i < un; ++i) {
                const TreatmentSample s = stream.next();
                x[i] = s.x;
                c[i] = valuesearch_contrast(s).c;
            }
            const SweepResult sweep = valuesearch_sweep(x, c, opt.value_bounds);
            e.theta = {sweep.representative};
            e.objective_value = sweep.max_value / static_cast<double>(n);
            break;
        }
    }
    return e;
}

}  // namespace

std::vector<GroupEstimate> run_groups(ExampleKind kind, std::uint64_t master_seed,
                                      std::uint64_t rep, int S, std::int64_t n,
                                      const RunOptions& opt) {
    if (n < 1) throw std::invalid_argument("run_groups: n must be >= 1");
    return run_groups_with(
        S,
        [&](int j) {
            try {
                return estimate_one_group(
                    kind, derive_seed(master_seed, rep, static_cast<std::uint64_t>(j)), n,
                    opt);
            } catch (const std::exception& ex) {
                throw std::runtime_error("group " + std::to_string(j) + ": " + ex.what());
            }
        },
        opt.threads);
}

}  // namespace cubedac
