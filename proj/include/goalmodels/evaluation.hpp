#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "goalmodels/estimation.hpp"
#include "goalmodels/prediction.hpp"

namespace goalmodels {

/// Ranked probability score over ordered classes:
/// (1/(r-1)) * sum_i (sum_{j<=i} (p_j - e_j))^2. Throws on unnormalized
/// probabilities or an invalid realized index.
double rps(std::span<const double> forecast, int realized);

struct LedgerRow {
    std::string match_id;
    int t = 0;
    int row_order = 0;  // within-day tiebreak, dataset order
    std::string league;
    std::string market;
    std::string model;
    std::vector<double> forecast;
    int realized = 0;
    double rps_value = 0.0;
};

struct BacktestLedger {
    std::vector<LedgerRow> rows;
    std::vector<std::string> skipped;  // fixtures absent for every model
};

struct ModelSpec {
    Model model = Model::DixonColes;
    double xi = 0.0;
    std::string tag;  // defaults to model_name(model)
};

/// Rolling-refit backtest: one ledger row per (match, market, model), all
/// models scored on the identical match set. A fixture any model cannot
/// score is dropped for all of them.
BacktestLedger backtest(const LeagueDataset& dataset,
                        std::span<const ModelSpec> models,
                        std::span<const MarketPartition> markets,
                        std::span<const int> calendar,
                        const FitConfig& config);

void save_ledger(const BacktestLedger& ledger, const std::string& path);

struct DiffPoint {
    int t = 0;
    int match_counter = 0;
    double diff = 0.0;  // running sum of rps_a - rps_b; positive favors b
    std::string group;
};

/// Running RPS difference over matches ordered by (t, ledger row order).
/// group = "" for all matches pooled, or "league" for one series per league.
std::vector<DiffPoint> cumulative_diff(const BacktestLedger& ledger,
                                       const std::string& model_a,
                                       const std::string& model_b,
                                       const std::string& market,
                                       const std::string& group = "");

struct ReshuffleReport {
    double observed_diff = 0.0;  // mean(rps_a - rps_b)
    double exceedance_fraction = 0.0;
    int n_b = 0;
    std::uint64_t seed = 0;
    int n_matches = 0;
};

/// Paired randomization test: swap each match's RPS pair with probability
/// 1/2 and count replicates whose evidence for the observed winner is at
/// least as strong as observed.
ReshuffleReport reshuffle_test(const BacktestLedger& ledger,
                               const std::string& model_a,
                               const std::string& model_b,
                               const std::string& market, int n_b,
                               std::uint64_t seed, int jobs = 1);

struct ThetaCi {
    double estimate = 0.0;  // theta3 at the baseline fit
    double lower = 0.0;
    double upper = 0.0;
    int n_rep = 0;
    int dropped = 0;  // non-converged replicates
    bool warning = false;  // more than 10% dropped
};

/// Nonparametric case-resample percentile interval for theta3: matches in
/// the window at day t are resampled with replacement (keeping their
/// original time weights) and the Mar-Co model is refitted per replicate.
ThetaCi bootstrap_theta_ci(const LeagueDataset& dataset, int t,
                           const FitConfig& config, int n_rep, double level,
                           std::uint64_t seed, int jobs = 1);

}  // namespace goalmodels
