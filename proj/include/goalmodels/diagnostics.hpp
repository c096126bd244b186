#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goalmodels/league_data.hpp"

namespace goalmodels {

struct TestReport {
    std::string name;
    double statistic = 0.0;
    double p_value = 0.0;
    int n_replicates = 0;
    std::uint64_t seed = 0;
    std::string notes;
};

// Caveat carried on every aggregated-score test report.
inline constexpr const char* kAggregationCaveat =
    "computed on aggregated home/away goals; results should be approached "
    "with particular caution";

/// Bootstrap test of the Pearson correlation between home and away goals.
/// Null distribution: the away column re-paired at random n_rep times.
/// Two-sided p-value with the (1 + hits) / (1 + n_rep) floor.
TestReport pearson_independence_test(const LeagueDataset& dataset, int n_rep,
                                     std::uint64_t seed, int jobs = 1);

/// Same machinery on collapsed scores x~ = max(1, x), y~ = max(1, y);
/// one-sided toward negative correlation.
TestReport collapsed_independence_test(const LeagueDataset& dataset, int n_rep,
                                       std::uint64_t seed, int jobs = 1);

struct RatioCell {
    std::optional<double> ratio;  // x100; absent when the cell is empty
    double se = 0.0;              // bootstrap standard error (x100)
    bool significant = false;     // |ratio - 100| > 1.96 se
};

struct RatioTable {
    int max_goals = 4;
    std::vector<RatioCell> cells;  // (max_goals+1)^2 row-major
    int n_rep = 0;
    std::uint64_t seed = 0;

    const RatioCell& at(int h, int a) const {
        return cells[h * (max_goals + 1) + a];
    }
    RatioCell& at(int h, int a) { return cells[h * (max_goals + 1) + a]; }
};

/// Observed joint/product-of-marginals frequency ratios with bootstrap SEs
/// from case resampling of matches.
RatioTable ratio_table(const LeagueDataset& dataset, int n_rep,
                       std::uint64_t seed, int max_goals = 4, int jobs = 1);

void save_ratio_table_csv(const RatioTable& table, const std::string& path);

/// Parametric bootstrap of the variance/mean ratio against Poisson(x_bar);
/// one-sided toward overdispersion.
TestReport dispersion_test(std::span<const int> counts, int n_rep,
                           std::uint64_t seed, int jobs = 1);

/// Parametric bootstrap of the KL divergence between the empirical counts
/// and Poisson(x_bar); one-sided toward large divergence. Each replicate's
/// statistic uses that replicate's own mean.
TestReport kl_poisson_test(std::span<const int> counts, int n_rep,
                           std::uint64_t seed, int jobs = 1);

/// Average-rank Spearman correlation (tie-robust).
double spearman(std::span<const int> x, std::span<const int> y);

struct SpearmanPoint {
    double theta3 = 0.0;
    double mean = 0.0;
    double lo = 0.0;  // 2.5 percentile across replicates
    double hi = 0.0;  // 97.5 percentile
};

/// Monte Carlo Spearman correlation of sampled match outcomes over a
/// theta3 grid, n_rep replicates of sample_size draws per point.
std::vector<SpearmanPoint> spearman_curve(std::span<const double> theta3_grid,
                                          double theta1, double theta2,
                                          double lambda, double mu, int n_rep,
                                          int sample_size, std::uint64_t seed,
                                          int jobs = 1);

}  // namespace goalmodels
