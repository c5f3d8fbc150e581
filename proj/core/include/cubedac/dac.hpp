#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cubedac/estimators.hpp"
#include "cubedac/simgen.hpp"

namespace cubedac {

struct GroupEstimate {
    int group_index = 0;
    std::vector<double> theta;
    // empirical objective at theta on the mean scale (count/n for the
    // indicator objectives, sum/n for value search)
    double objective_value = 0.0;
    std::int64_t group_size = 0;
};

struct PartitionPlan {
    std::int64_t group_size = 0;  // n = floor(N/S)
    int groups = 0;               // S
    std::int64_t discarded = 0;   // N - S*n, dropped to keep equal allocation
    std::string warning;          // nonempty iff discarded > 0

    std::vector<std::int64_t> sizes() const {
        return std::vector<std::int64_t>(static_cast<std::size_t>(groups), group_size);
    }
};
PartitionPlan partition(std::int64_t N, int S);

// Componentwise mean, summed in ascending group order with pairwise
// summation (fixed order => identical across thread counts).
std::vector<double> aggregate(std::span<const GroupEstimate> estimates);

struct SeEstimate {
    std::vector<double> se;                // sqrt(cov[k][k] / S)
    std::vector<std::vector<double>> cov;  // sample covariance of the group estimates
};
// Order-independent: means and deviation products are accumulated with
// exactly rounded summation, so any permutation of the groups gives
// bit-identical output.
SeEstimate se_hat(std::span<const GroupEstimate> estimates);

std::vector<std::pair<double, double>> wald_ci(std::span<const double> theta0,
                                               std::span<const double> se, double level);

struct TruncationDiagnostic {
    double delta_n = 0.0;
    int exceed_count = 0;
};
// delta_n = max(3, 3/c1)^(1/3) * (ln n)^(1/3); counts groups whose rescaled
// deviation n^(1/3) * ||theta_j - center|| exceeds it. center defaults to
// the aggregate; pass the true parameter to study deviations around it.
TruncationDiagnostic truncation_diagnostic(std::span<const GroupEstimate> estimates,
                                           std::int64_t n,
                                           std::span<const double> center = {},
                                           double c1 = 1.0);

struct AggregateReport {
    std::vector<double> theta0;
    std::vector<double> se;
    std::vector<std::vector<double>> cov;
    std::vector<std::pair<double, double>> ci;
    int S = 0;
    std::int64_t n = 0;
    double delta_n = 0.0;
    int truncation_exceed_count = 0;
};
AggregateReport build_report(std::span<const GroupEstimate> estimates, std::int64_t n,
                             double ci_level);

struct RunOptions {
    int threads = 0;  // <= 0: all logical cores
    Bounds value_bounds = kDefaultValueBounds;
    double value_noise_sd = 0.5;
};

// Simulation-driven runner: group j estimates on n fresh draws from the
// design stream seeded with derive_seed(master_seed, rep, j). Results are
// identical for any thread count.
std::vector<GroupEstimate> run_groups(ExampleKind kind, std::uint64_t master_seed,
                                      std::uint64_t rep, int S, std::int64_t n,
                                      const RunOptions& opt = {});

// Generic runner: fn(j) produces group j's estimate; executed as a parallel
// map, returned in ascending group order.
std::vector<GroupEstimate> run_groups_with(int S,
                                           const std::function<GroupEstimate(int)>& fn,
                                           int threads = 0);

}  // namespace cubedac
