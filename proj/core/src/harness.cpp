#include "cubedac/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "cubedac/parallel.hpp"

namespace cubedac {

namespace {

// Pooled estimator on the concatenation of the S group streams of one
// replication, so pooled and aggregated runs see the same data.
std::vector<double> pooled_estimate(ExampleKind kind, std::uint64_t master_seed,
                                    std::uint64_t rep, int S, std::int64_t n,
                                    const RunOptions& opt) {
    const std::size_t total = static_cast<std::size_t>(S) * static_cast<std::size_t>(n);
    switch (kind) {
        case ExampleKind::location: {
            std::vector<double> xs;
            xs.reserve(total);
            for (int j = 0; j < S; ++j) {
                LocationStream stream(derive_seed(master_seed, rep, static_cast<std::uint64_t>(j)));
                for (std::int64_t i = 0; i < n; ++i) xs.push_back(stream.next());
            }
            return {location_sweep(xs).representative};
        }
        case ExampleKind::maxscore: {
            std::vector<double> x1, x2, y;
            x1.reserve(total);
            x2.reserve(total);
            y.reserve(total);
            for (int j = 0; j < S; ++j) {
                MaxscoreStream stream(derive_seed(master_seed, rep, static_cast<std::uint64_t>(j)));
                for (std::int64_t i = 0; i < n; ++i) {
                    double a, b, c;
                    stream.next(a, b, c);
                    x1.push_back(a);
                    x2.push_back(b);
                    y.push_back(c);
                }
            }
            double beta[2];
            estimate_maxscore_2d(x1, x2, y, beta);
            return {beta[0], beta[1]};
        }
        case ExampleKind::valuesearch: {
            std::vector<double> x, c;
            x.reserve(total);
            c.reserve(total);
            for (int j = 0; j < S; ++j) {
                ValuesearchStream stream(derive_seed(master_seed, rep, static_cast<std::uint64_t>(j)),
                                         opt.value_noise_sd);
                for (std::int64_t i = 0; i < n; ++i) {
                    const TreatmentSample s = stream.next();
                    x.push_back(s.x);
                    c.push_back(valuesearch_contrast(s).c);
                }
            }
            return {valuesearch_sweep(x, c, opt.value_bounds).representative};
        }
    }
    throw std::logic_error("unreachable");
}

double column_mean(std::span<const double> col) {
    return pairwise_sum(col) / static_cast<double>(col.size());
}

double column_sd(std::span<const double> col, double mean) {
    std::vector<double> sq(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) {
        const double d = col[i] - mean;
        sq[i] = d * d;
    }
    return std::sqrt(pairwise_sum(sq) / static_cast<double>(col.size() - 1));
}

}  // namespace

CellResult run_cell(const SimulationDesign& design, const TruthSpec& truth,
                    bool include_pooled, const RunOptions& opt) {
    if (design.reps < 1) throw std::invalid_argument("run_cell: reps must be >= 1");
    const PartitionPlan plan = partition(design.N, design.S);
    const std::int64_t n = plan.group_size;
    const std::size_t d = truth.theta_true.size();
    const std::size_t reps = static_cast<std::size_t>(design.reps);

    const auto t0 = std::chrono::steady_clock::now();

    // Per-replication records, indexed by replication so results do not
    // depend on scheduling.
    std::vector<double> theta0s(reps * d), ses(reps * d), pooled(include_pooled ? reps * d : 0);
    std::vector<unsigned char> covers(reps * d);

    const int outer_threads = resolve_threads(opt.threads);
    RunOptions inner = opt;
    inner.threads = (design.reps < outer_threads) ? outer_threads : 1;

    parallel_for(design.reps, outer_threads, [&](std::int64_t rep) {
        try {
            const std::vector<GroupEstimate> groups =
                run_groups(design.example, design.master_seed,
                           static_cast<std::uint64_t>(rep), design.S, n, inner);
            const std::vector<double> theta0 = aggregate(groups);
            if (theta0.size() != d)
                throw std::invalid_argument("truth dimension does not match the design");
            std::vector<double> se(d, 0.0);
            if (design.S >= 2) se = se_hat(groups).se;
            const auto ci = wald_ci(theta0, se, design.ci_level);
            const std::size_t base = static_cast<std::size_t>(rep) * d;
            for (std::size_t k = 0; k < d; ++k) {
                theta0s[base + k] = theta0[k];
                ses[base + k] = se[k];
                const double t = truth.theta_true[k];
                covers[base + k] = (ci[k].first <= t && t <= ci[k].second) ? 1 : 0;
            }
            if (include_pooled) {
                const std::vector<double> pe = pooled_estimate(
                    design.example, design.master_seed, static_cast<std::uint64_t>(rep),
                    design.S, n, opt);
                for (std::size_t k = 0; k < d; ++k) pooled[base + k] = pe[k];
            }
        } catch (const std::exception& ex) {
            throw std::runtime_error("replication " + std::to_string(rep) + ": " + ex.what());
        }
    });

    CellResult cell;
    cell.design = design;
    cell.truth = truth;
    cell.reps_used = design.reps;
    cell.coords.resize(d);

    std::vector<double> col(reps);
    for (std::size_t k = 0; k < d; ++k) {
        CoordStats& cs = cell.coords[k];
        for (std::size_t r = 0; r < reps; ++r) col[r] = theta0s[r * d + k];
        const double mean = column_mean(col);
        cs.bias = mean - truth.theta_true[k];
        cs.sd = (reps >= 2) ? column_sd(col, mean) : 0.0;
        for (std::size_t r = 0; r < reps; ++r) col[r] = ses[r * d + k];
        cs.se_mean = column_mean(col);
        std::int64_t hits = 0;
        for (std::size_t r = 0; r < reps; ++r) hits += covers[r * d + k];
        cs.cp = static_cast<double>(hits) / static_cast<double>(reps);
        cs.bias_flagged =
            reps >= 2 && std::fabs(cs.bias) > 5.0 * cs.sd / std::sqrt(static_cast<double>(reps));
        if (include_pooled) {
            for (std::size_t r = 0; r < reps; ++r) col[r] = pooled[r * d + k];
            const double pmean = column_mean(col);
            cs.pooled_bias = pmean - truth.theta_true[k];
            cs.pooled_sd = (reps >= 2) ? column_sd(col, pmean) : 0.0;
        }
    }

    cell.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return cell;
}

// ---- CSV ----

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<McRow> to_rows(const CellResult& cell) {
    std::vector<McRow> rows;
    rows.reserve(cell.coords.size());
    for (std::size_t k = 0; k < cell.coords.size(); ++k) {
        const CoordStats& cs = cell.coords[k];
        McRow row;
        row.example = example_name(cell.design.example);
        row.N = cell.design.N;
        row.S = cell.design.S;
        row.reps = cell.reps_used;
        row.coord = static_cast<int>(k);
        row.bias = cs.bias;
        row.sd = cs.sd;
        row.se_mean = cs.se_mean;
        row.cp = cs.cp;
        row.pooled_sd = cs.pooled_sd;
        row.runtime_s = cell.runtime_s;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string mc_csv_header() {
    return "example,N,S,reps,coord,bias,sd,se_mean,cp,pooled_sd,runtime_s";
}

std::string to_csv(std::span<const McRow> rows) {
    std::string out = mc_csv_header();
    out += '\n';
    for (const McRow& r : rows) {
        out += r.example;
        out += ',' + std::to_string(r.N);
        out += ',' + std::to_string(r.S);
        out += ',' + std::to_string(r.reps);
        out += ',' + std::to_string(r.coord);
        out += ',' + format_double(r.bias);
        out += ',' + format_double(r.sd);
        out += ',' + format_double(r.se_mean);
        out += ',' + format_double(r.cp);
        out += ',';
        if (r.pooled_sd) out += format_double(*r.pooled_sd);
        out += ',' + format_double(r.runtime_s);
        out += '\n';
    }
    return out;
}

std::vector<McRow> parse_mc_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != mc_csv_header())
        throw std::invalid_argument("mc csv: missing or wrong header");
    std::vector<McRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (fields.size() != 11)
            throw std::invalid_argument("mc csv line " + std::to_string(line_no) +
                                        ": expected 11 fields");
        McRow r;
        try {
            r.example = fields[0];
            r.N = std::stoll(fields[1]);
            r.S = std::stoi(fields[2]);
            r.reps = std::stoi(fields[3]);
            r.coord = std::stoi(fields[4]);
            r.bias = std::stod(fields[5]);
            r.sd = std::stod(fields[6]);
            r.se_mean = std::stod(fields[7]);
            r.cp = std::stod(fields[8]);
            if (!fields[9].empty()) r.pooled_sd = std::stod(fields[9]);
            r.runtime_s = std::stod(fields[10]);
        } catch (const std::exception&) {
            throw std::invalid_argument("mc csv line " + std::to_string(line_no) +
                                        ": malformed number");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string to_text_table(std::span<const McRow> rows) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-12s %10s %5s %6s %6s %12s %12s %12s %8s %12s %10s\n",
                  "example", "N", "S", "reps", "coord", "bias", "sd", "se_mean", "cp",
                  "pooled_sd", "runtime_s");
    out += buf;
    for (const McRow& r : rows) {
        std::snprintf(buf, sizeof buf,
                      "%-12s %10lld %5d %6d %6d %12.5g %12.5g %12.5g %8.3f %12s %10.2f\n",
                      r.example.c_str(), static_cast<long long>(r.N), r.S, r.reps, r.coord,
                      r.bias, r.sd, r.se_mean, r.cp,
                      r.pooled_sd ? format_double(*r.pooled_sd).substr(0, 10).c_str() : "-",
                      r.runtime_s);
        out += buf;
    }
    return out;
}

// ---- rate regressions ----

namespace {

RateFit fit_rate(std::vector<RatePoint> points) {
    std::vector<double> lx(points.size()), ly(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        lx[i] = std::log(static_cast<double>(points[i].size));
        ly[i] = std::log(points[i].sd);
    }
    const LineFit fit = fit_line(lx, ly);
    RateFit out;
    out.slope = fit.slope;
    out.r2 = fit.r2;
    out.points = std::move(points);
    return out;
}

double cell_sd(ExampleKind kind, int S, std::int64_t n, int reps, std::uint64_t seed,
               const RunOptions& opt) {
    SimulationDesign design;
    design.example = kind;
    design.N = n * S;
    design.S = S;
    design.reps = reps;
    design.master_seed = seed;
    const CellResult cell = run_cell(design, default_truth(kind), false, opt);
    return cell.coords[0].sd;
}

void check_rate_pre(std::size_t grid, int reps) {
    if (grid < 4) throw std::invalid_argument("rate check: need a grid of >= 4 sizes");
    if (reps < 300) throw std::invalid_argument("rate check: need >= 300 reps per cell");
}

}  // namespace

RateFit rate_vs_n(ExampleKind kind, int S_fixed, std::span<const std::int64_t> n_grid,
                  int reps, std::uint64_t seed, const RunOptions& opt) {
    check_rate_pre(n_grid.size(), reps);
    std::vector<RatePoint> points;
    points.reserve(n_grid.size());
    for (std::int64_t n : n_grid)
        points.push_back({n, cell_sd(kind, S_fixed, n, reps, seed, opt)});
    return fit_rate(std::move(points));
}

RateFit rate_vs_s(ExampleKind kind, std::int64_t n_fixed, std::span<const int> s_grid,
                  int reps, std::uint64_t seed, const RunOptions& opt) {
    check_rate_pre(s_grid.size(), reps);
    std::vector<RatePoint> points;
    points.reserve(s_grid.size());
    for (int S : s_grid)
        points.push_back({S, cell_sd(kind, S, n_fixed, reps, seed, opt)});
    return fit_rate(std::move(points));
}

RateFit rate_pooled(ExampleKind kind, std::span<const std::int64_t> n_totals, int reps,
                    std::uint64_t seed, const RunOptions& opt) {
    check_rate_pre(n_totals.size(), reps);
    std::vector<RatePoint> points;
    points.reserve(n_totals.size());
    for (std::int64_t n : n_totals)
        points.push_back({n, cell_sd(kind, 1, n, reps, seed, opt)});
    return fit_rate(std::move(points));
}

// ---- distribution diagnostics ----

NormalityReport normality_check(std::span<const double> theta0_samples, double truth,
                                double se_oracle) {
    if (theta0_samples.size() < 500)
        throw std::invalid_argument("normality_check: need >= 500 samples");
    const Moments m = compute_moments(theta0_samples);
    NormalityReport rep;
    rep.n = m.n;
    rep.mean = m.mean;
    rep.sd = m.sd;
    rep.degenerate = m.degenerate;
    if (m.degenerate) return rep;  // stats stay zeroed, never NaN
    rep.skewness = m.skewness;
    rep.excess_kurtosis = m.excess_kurtosis;
    std::vector<double> z(theta0_samples.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (theta0_samples[i] - m.mean) / m.sd;
    rep.ks_statistic = ks_statistic_normal(z);
    if (se_oracle > 0.0) rep.z_mean = (m.mean - truth) / se_oracle;
    return rep;
}

TailReport tail_check(ExampleKind kind, std::int64_t n, int reps, std::uint64_t seed,
                      const RunOptions& opt) {
    if (reps < 10000) throw std::invalid_argument("tail_check: need >= 1e4 replications");
    const TruthSpec truth = default_truth(kind);
    const std::size_t d = truth.theta_true.size();

    std::vector<double> dev(static_cast<std::size_t>(reps));
    const double scale = std::cbrt(static_cast<double>(n));
    parallel_for(reps, opt.threads, [&](std::int64_t rep) {
        const std::vector<GroupEstimate> one =
            run_groups(kind, seed, static_cast<std::uint64_t>(rep), 1, n, opt);
        double ss = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double delta = scale * (one[0].theta[k] - truth.theta_true[k]);
            ss += delta * delta;
        }
        dev[static_cast<std::size_t>(rep)] = std::sqrt(ss);
    });

    TailReport report;
    for (double x = 1.0; x <= 5.0 + 1e-12; x += 0.5) report.grid.push_back(x);
    report.survival.resize(report.grid.size());
    for (std::size_t g = 0; g < report.grid.size(); ++g) {
        std::int64_t count = 0;
        for (double v : dev)
            if (v >= report.grid[g]) ++count;
        report.survival[g] = static_cast<double>(count) / static_cast<double>(reps);
    }

    report.monotone = true;
    for (std::size_t g = 1; g < report.survival.size(); ++g)
        if (report.survival[g] > report.survival[g - 1]) report.monotone = false;

    std::vector<double> x3, ls;
    for (std::size_t g = 0; g < report.grid.size(); ++g) {
        if (report.survival[g] <= 0.0) continue;
        x3.push_back(report.grid[g] * report.grid[g] * report.grid[g]);
        ls.push_back(std::log(report.survival[g]));
    }
    report.observable_points = static_cast<int>(x3.size());
    if (x3.size() >= 2) {
        const LineFit fit = fit_line(x3, ls);
        report.slope = fit.slope;
        report.r2 = fit.r2;
    }
    return report;
}

}  // namespace cubedac
