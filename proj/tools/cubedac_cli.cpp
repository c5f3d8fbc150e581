// cubedac: divide-and-conquer aggregation for cube-root-rate M-estimators.
//
// Subcommands:
//   estimate    run the pipeline on a CSV dataset
//   simulate    Monte-Carlo cell (bias/SD/SE/coverage) for a built-in design
//   rate-check  log-log rate regressions of the aggregated estimator's SD
//   limit-var   limiting-process variance oracle for the location design
//
// Exit codes: 0 success, 1 runtime numeric failure, 2 usage/input error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cubedac/dac.hpp"
#include "cubedac/dataio.hpp"
#include "cubedac/harness.hpp"
#include "cubedac/limitproc.hpp"
#include "cubedac/mathutil.hpp"
#include "cubedac/parallel.hpp"
#include "cubedac/rng.hpp"

namespace {

using namespace cubedac;

int thread_cap(std::optional<int> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("CUBEDAC_THREADS")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("CUBEDAC_THREADS is not an integer");
        }
    }
    return 0;  // all logical cores
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// seeded Fisher-Yates with our own engine, so shuffles reproduce everywhere
template <class T>
void seeded_shuffle(std::vector<T>& v, std::uint64_t seed) {
    Rng rng(seed);
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[static_cast<std::size_t>(rng.below(i))]);
}

struct EstimateArgs {
    std::string example;
    std::string input;
    int S = 2;
    double ci_level = 0.95;
    bool no_se = false;
    std::optional<std::uint64_t> shuffle_seed;
    std::optional<int> threads;
    double value_lo = kDefaultValueBounds.lo;
    double value_hi = kDefaultValueBounds.hi;
    std::optional<std::string> output;
};

template <class Sample, class EstimateFn>
std::vector<GroupEstimate> estimate_blocks(std::vector<Sample>& data, int S,
                                           std::optional<std::uint64_t> shuffle_seed,
                                           int threads, EstimateFn&& fn) {
    if (shuffle_seed) seeded_shuffle(data, *shuffle_seed);
    const PartitionPlan plan = partition(static_cast<std::int64_t>(data.size()), S);
    if (!plan.warning.empty()) std::cerr << "warning: " << plan.warning << "\n";
    const std::int64_t n = plan.group_size;
    return run_groups_with(
        S,
        [&](int j) {
            std::span<const Sample> block(data.data() + static_cast<std::size_t>(j) * n,
                                          static_cast<std::size_t>(n));
            GroupEstimate e = fn(block);
            e.group_size = n;
            return e;
        },
        threads);
}

int cmd_estimate(const EstimateArgs& args) {
    const ExampleKind kind = example_from_name(args.example);
    if (args.S < 1) throw std::invalid_argument("-S must be >= 1");
    if (args.S == 1 && !args.no_se)
        throw std::invalid_argument("need at least two groups for SE (use --no-se for S=1)");
    const int threads = thread_cap(args.threads);
    const Bounds vb{args.value_lo, args.value_hi};

    std::vector<GroupEstimate> groups;
    std::int64_t n = 0;
    switch (kind) {
        case ExampleKind::location: {
            std::vector<double> xs = read_location_csv(args.input);
            groups = estimate_blocks(xs, args.S, args.shuffle_seed, threads,
                                     [](std::span<const double> block) {
                                         const SweepResult sweep = location_sweep(block);
                                         GroupEstimate e;
                                         e.theta = {sweep.representative};
                                         e.objective_value =
                                             sweep.max_value / static_cast<double>(block.size());
                                         return e;
                                     });
            break;
        }
        case ExampleKind::maxscore: {
            std::vector<RegressionSample> data = read_maxscore_csv(args.input);
            groups = estimate_blocks(data, args.S, args.shuffle_seed, threads,
                                     [](std::span<const RegressionSample> block) {
                                         GroupEstimate e;
                                         e.theta = estimate_maxscore_2d(block);
                                         const SweepResult sweep = maxscore_angle_sweep(block);
                                         e.objective_value =
                                             sweep.max_value / static_cast<double>(block.size());
                                         return e;
                                     });
            break;
        }
        case ExampleKind::valuesearch: {
            std::vector<TreatmentSample> data = read_valuesearch_csv(args.input);
            groups = estimate_blocks(data, args.S, args.shuffle_seed, threads,
                                     [&](std::span<const TreatmentSample> block) {
                                         const SweepResult sweep = valuesearch_sweep(block, vb);
                                         GroupEstimate e;
                                         e.theta = {sweep.representative};
                                         e.objective_value =
                                             sweep.max_value / static_cast<double>(block.size());
                                         return e;
                                     });
            break;
        }
    }
    n = groups.front().group_size;

    for (const GroupEstimate& g : groups) {
        std::printf("group %d (n=%lld): theta = (", g.group_index,
                    static_cast<long long>(g.group_size));
        for (std::size_t k = 0; k < g.theta.size(); ++k)
            std::printf("%s%.10g", k ? ", " : "", g.theta[k]);
        std::printf("), objective = %.10g\n", g.objective_value);
    }

    const std::vector<double> theta0 = aggregate(groups);
    std::printf("aggregate: (");
    for (std::size_t k = 0; k < theta0.size(); ++k)
        std::printf("%s%.10g", k ? ", " : "", theta0[k]);
    std::printf(")\n");

    std::string csv = "coord,theta0,se,ci_lo,ci_hi\n";
    if (!args.no_se) {
        const AggregateReport report = build_report(groups, n, args.ci_level);
        for (std::size_t k = 0; k < theta0.size(); ++k) {
            std::printf("coord %zu: theta0 = %.10g, se = %.10g, %g%% CI [%.10g, %.10g]\n", k,
                        report.theta0[k], report.se[k], 100.0 * args.ci_level,
                        report.ci[k].first, report.ci[k].second);
            csv += std::to_string(k) + ',' + fmt17(report.theta0[k]) + ',' +
                   fmt17(report.se[k]) + ',' + fmt17(report.ci[k].first) + ',' +
                   fmt17(report.ci[k].second) + '\n';
        }
        std::printf("truncation diagnostic: delta_n = %.6g, exceeding groups = %d of %d\n",
                    report.delta_n, report.truncation_exceed_count, report.S);
    } else {
        for (std::size_t k = 0; k < theta0.size(); ++k)
            csv += std::to_string(k) + ',' + fmt17(theta0[k]) + ",,,\n";
    }
    if (args.output) write_file(*args.output, csv);
    return 0;
}

struct SimulateArgs {
    std::string example;
    int n_exp = 14;
    int s_exp = 4;
    int reps = 1000;
    std::uint64_t seed = 1;
    double ci_level = 0.95;
    bool include_pooled = false;
    std::optional<int> threads;
    std::optional<std::string> output;
};

int cmd_simulate(const SimulateArgs& args) {
    SimulationDesign design;
    design.example = example_from_name(args.example);
    if (args.n_exp < 0 || args.n_exp > 40) throw std::invalid_argument("--n-exp out of range");
    if (args.s_exp < 0 || args.s_exp > 20) throw std::invalid_argument("--s-exp out of range");
    design.N = std::int64_t{1} << args.n_exp;
    design.S = 1 << args.s_exp;
    design.reps = args.reps;
    design.master_seed = args.seed;
    design.ci_level = args.ci_level;

    RunOptions opt;
    opt.threads = thread_cap(args.threads);

    const CellResult cell =
        run_cell(design, default_truth(design.example), args.include_pooled, opt);
    const std::vector<McRow> rows = to_rows(cell);
    std::fputs(to_text_table(rows).c_str(), stdout);
    for (std::size_t k = 0; k < cell.coords.size(); ++k)
        if (cell.coords[k].bias_flagged)
            std::fprintf(stderr,
                         "note: coord %zu bias exceeds 5x its Monte-Carlo standard error\n", k);
    if (args.output) write_file(*args.output, to_csv(rows));
    return 0;
}

struct RateArgs {
    std::string example = "location";
    std::optional<int> s_exp;
    std::vector<int> n_exps;
    std::optional<int> n_exp;
    std::vector<int> s_exps;
    int reps = 300;
    std::uint64_t seed = 1;
    bool pooled = false;
    std::optional<int> threads;
    std::optional<std::string> output;
};

int cmd_rate_check(const RateArgs& args) {
    const ExampleKind kind = example_from_name(args.example);
    RunOptions opt;
    opt.threads = thread_cap(args.threads);

    const bool have_n_grid = !args.n_exps.empty();
    const bool have_s_grid = !args.s_exps.empty();
    if (!have_n_grid && !have_s_grid)
        throw std::invalid_argument("rate-check needs --n-exps (with --s-exp) or --s-exps (with --n-exp)");

    std::string csv = "mode,size,sd,slope,r2\n";
    auto emit = [&](const char* mode, const RateFit& fit) {
        std::printf("%s: slope = %.4f, r2 = %.4f over", mode, fit.slope, fit.r2);
        for (const RatePoint& p : fit.points) std::printf(" %lld", static_cast<long long>(p.size));
        std::printf("\n");
        for (const RatePoint& p : fit.points)
            csv += std::string(mode) + ',' + std::to_string(p.size) + ',' + fmt17(p.sd) + ',' +
                   fmt17(fit.slope) + ',' + fmt17(fit.r2) + '\n';
    };

    if (have_n_grid) {
        if (!args.s_exp) throw std::invalid_argument("--n-exps requires --s-exp");
        std::vector<std::int64_t> grid;
        for (int e : args.n_exps) grid.push_back(std::int64_t{1} << e);
        emit("sd_vs_n", rate_vs_n(kind, 1 << *args.s_exp, grid, args.reps, args.seed, opt));
        if (args.pooled) {
            std::vector<std::int64_t> totals;
            for (std::int64_t n : grid) totals.push_back(n * (std::int64_t{1} << *args.s_exp));
            emit("pooled_vs_total", rate_pooled(kind, totals, args.reps, args.seed, opt));
        }
    }
    if (have_s_grid) {
        if (!args.n_exp) throw std::invalid_argument("--s-exps requires --n-exp");
        std::vector<int> grid;
        for (int e : args.s_exps) grid.push_back(1 << e);
        emit("sd_vs_S",
             rate_vs_s(kind, std::int64_t{1} << *args.n_exp, grid, args.reps, args.seed, opt));
    }
    if (args.output) write_file(*args.output, csv);
    return 0;
}

struct LimitVarArgs {
    int reps = 100000;
    double step = 0.01;
    double half_width = 8.0;
    std::optional<std::uint64_t> seed;
    std::optional<double> factor;
    std::optional<int> threads;
    std::optional<std::string> output;
};

int cmd_limit_var(const LimitVarArgs& args) {
    LimitProcessSpec spec = location_limit_spec();
    spec.reps = args.reps;
    spec.step = args.step;
    spec.half_width = args.half_width;
    if (args.seed) spec.seed = *args.seed;
    const int threads = thread_cap(args.threads);

    const std::vector<double> samples = simulate_argmax(spec, threads);
    const VarianceEstimate est = estimate_limit_variance(samples);
    std::printf("limit argmax variance A = %.6g (jackknife se %.3g, %lld reps)\n", est.variance,
                est.jackknife_se, static_cast<long long>(est.n));

    std::string csv = "sigma2,curvature,half_width,step,reps,variance,jackknife_se\n";
    csv += fmt17(spec.sigma2) + ',' + fmt17(spec.curvature) + ',' + fmt17(spec.half_width) +
           ',' + fmt17(spec.step) + ',' + std::to_string(spec.reps) + ',' +
           fmt17(est.variance) + ',' + fmt17(est.jackknife_se) + '\n';

    if (args.factor) {
        const ScalingReport rep = scaling_law_check(spec, *args.factor, threads);
        std::printf("scaling check x%g: sd ratio %.4f vs theoretical %.4f\n", *args.factor,
                    rep.empirical_ratio, rep.theoretical_ratio);
    }
    if (args.output) write_file(*args.output, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"divide-and-conquer aggregation for cube-root-rate M-estimators"};
    app.require_subcommand(1);

    EstimateArgs est;
    CLI::App* cest = app.add_subcommand("estimate", "estimate from a CSV dataset");
    cest->add_option("--example", est.example, "location | maxscore | valuesearch")->required();
    cest->add_option("--input", est.input, "input CSV path")->required();
    cest->add_option("-S,--groups", est.S, "number of groups")->required();
    cest->add_option("--ci-level", est.ci_level, "confidence level (default 0.95)");
    cest->add_flag("--no-se", est.no_se, "skip SE/CI (allows S=1)");
    cest->add_option("--shuffle-seed", est.shuffle_seed,
                     "apply a seeded permutation before partitioning");
    cest->add_option("--threads", est.threads, "worker thread cap");
    cest->add_option("--value-lo", est.value_lo, "value-search parameter lower bound");
    cest->add_option("--value-hi", est.value_hi, "value-search parameter upper bound");
    cest->add_option("--output", est.output, "write report CSV here");

    SimulateArgs sim;
    CLI::App* csim = app.add_subcommand("simulate", "Monte-Carlo cell for a built-in design");
    csim->add_option("--example", sim.example, "location | maxscore | valuesearch")->required();
    csim->add_option("--n-exp", sim.n_exp, "total sample size N = 2^n_exp")->required();
    csim->add_option("--s-exp", sim.s_exp, "group count S = 2^s_exp")->required();
    csim->add_option("--reps", sim.reps, "Monte-Carlo replications")->required();
    csim->add_option("--seed", sim.seed, "master seed");
    csim->add_option("--ci-level", sim.ci_level, "confidence level (default 0.95)");
    csim->add_flag("--include-pooled", sim.include_pooled, "also run the pooled estimator");
    csim->add_option("--threads", sim.threads, "worker thread cap");
    csim->add_option("--output", sim.output, "write cell CSV here");

    RateArgs rate;
    CLI::App* crate = app.add_subcommand("rate-check", "log-log SD rate regressions");
    crate->add_option("--example", rate.example, "location | maxscore | valuesearch");
    crate->add_option("--s-exp", rate.s_exp, "fixed S = 2^s_exp for the n grid");
    crate->add_option("--n-exps", rate.n_exps, "group-size exponents, e.g. 9,10,11,12")
        ->delimiter(',');
    crate->add_option("--n-exp", rate.n_exp, "fixed n = 2^n_exp for the S grid");
    crate->add_option("--s-exps", rate.s_exps, "group-count exponents, e.g. 3,4,5,6")
        ->delimiter(',');
    crate->add_option("--reps", rate.reps, "replications per grid point (>= 300)");
    crate->add_option("--seed", rate.seed, "master seed");
    crate->add_flag("--pooled", rate.pooled, "also fit the pooled estimator vs total N");
    crate->add_option("--threads", rate.threads, "worker thread cap");
    crate->add_option("--output", rate.output, "write rate CSV here");

    LimitVarArgs lim;
    CLI::App* clim = app.add_subcommand("limit-var", "limiting-process variance oracle");
    clim->add_option("--reps", lim.reps, "argmax replications (default 1e5)");
    clim->add_option("--step", lim.step, "grid step (default 0.01)");
    clim->add_option("--half-width", lim.half_width, "grid half-width (default 8)");
    clim->add_option("--seed", lim.seed, "seed (default from the location spec)");
    clim->add_option("--factor", lim.factor, "also run the scaling-law check at this factor");
    clim->add_option("--threads", lim.threads, "worker thread cap");
    clim->add_option("--output", lim.output, "write variance CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits 0; bad usage exits 2
    }

    try {
        if (cest->parsed()) return cmd_estimate(est);
        if (csim->parsed()) return cmd_simulate(sim);
        if (crate->parsed()) return cmd_rate_check(rate);
        if (clim->parsed()) return cmd_limit_var(lim);
        std::fprintf(stderr, "no subcommand\n");
        return 2;
    } catch (const CsvError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 1;
    }
}
