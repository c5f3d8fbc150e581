#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cubedac/dac.hpp"
#include "cubedac/mathutil.hpp"
#include "cubedac/simgen.hpp"

namespace cubedac {

struct CoordStats {
    double bias = 0.0;
    double sd = 0.0;
    double se_mean = 0.0;
    double cp = 0.0;
    // set when |bias| > 5 * sd / sqrt(reps), making accumulated subgroup
    // bias visible as S grows
    bool bias_flagged = false;
    std::optional<double> pooled_bias;
    std::optional<double> pooled_sd;
};

struct CellResult {
    SimulationDesign design;
    TruthSpec truth;
    std::vector<CoordStats> coords;
    int reps_used = 0;
    double runtime_s = 0.0;
};

// One Monte-Carlo cell: `reps` replications of generate -> split -> estimate
// -> aggregate -> CI, reduced in fixed replication order. include_pooled
// additionally runs the estimator once per replication on all N = S * n
// observations (the concatenated group streams).
CellResult run_cell(const SimulationDesign& design, const TruthSpec& truth,
                    bool include_pooled, const RunOptions& opt = {});

// ---- CSV ----
// Schema: example,N,S,reps,coord,bias,sd,se_mean,cp,pooled_sd,runtime_s
// (one row per coordinate, floats at 17 significant digits, empty field for
// an absent pooled_sd).

struct McRow {
    std::string example;
    std::int64_t N = 0;
    int S = 0;
    int reps = 0;
    int coord = 0;
    double bias = 0.0;
    double sd = 0.0;
    double se_mean = 0.0;
    double cp = 0.0;
    std::optional<double> pooled_sd;
    double runtime_s = 0.0;

    bool operator==(const McRow&) const = default;
};

std::vector<McRow> to_rows(const CellResult& cell);
std::string mc_csv_header();
std::string to_csv(std::span<const McRow> rows);          // header + rows
std::vector<McRow> parse_mc_csv(std::string_view text);   // strict round-trip

// Aligned human-readable table.
std::string to_text_table(std::span<const McRow> rows);

// ---- rate regressions ----

struct RatePoint {
    std::int64_t size = 0;  // the varying quantity (n, S, or total N)
    double sd = 0.0;        // Monte-Carlo SD of coordinate 0 of theta0-hat
};

struct RateFit {
    double slope = 0.0;  // least-squares slope of log sd on log size
    double r2 = 0.0;
    std::vector<RatePoint> points;
};

// All rate runs share one master seed across grid points (common random
// numbers), which lowers the variance of the fitted slope.
RateFit rate_vs_n(ExampleKind kind, int S_fixed, std::span<const std::int64_t> n_grid,
                  int reps, std::uint64_t seed, const RunOptions& opt = {});
RateFit rate_vs_s(ExampleKind kind, std::int64_t n_fixed, std::span<const int> s_grid,
                  int reps, std::uint64_t seed, const RunOptions& opt = {});
// Pooled estimator (S = 1) across total sizes.
RateFit rate_pooled(ExampleKind kind, std::span<const std::int64_t> n_totals, int reps,
                    std::uint64_t seed, const RunOptions& opt = {});

struct RateReport {
    RateFit vs_n;
    RateFit vs_s;
    RateFit pooled;
};

// ---- distribution diagnostics ----

struct NormalityReport {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double ks_statistic = 0.0;  // standardized by own mean/sd, against N(0,1)
    // (mean - truth)/se_oracle when an oracle SE is supplied, else 0
    double z_mean = 0.0;
    bool degenerate = false;
};
NormalityReport normality_check(std::span<const double> theta0_samples,
                                double truth = 0.0, double se_oracle = 0.0);

struct TailReport {
    std::vector<double> grid;      // x = 1, 1.5, ..., 5
    std::vector<double> survival;  // P(||n^(1/3)(theta-hat - theta0)|| >= x)
    double slope = 0.0;            // log survival against x^3, observable range
    double r2 = 0.0;
    bool monotone = false;
    int observable_points = 0;  // grid points with positive survival
};
TailReport tail_check(ExampleKind kind, std::int64_t n, int reps, std::uint64_t seed,
                      const RunOptions& opt = {});

}  // namespace cubedac
