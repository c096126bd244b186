#pragma once

#include <optional>
#include <span>
#include <vector>

#include "goalmodels/league_data.hpp"
#include "goalmodels/ratings.hpp"

namespace goalmodels {

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitConfig {
    Model model = Model::DixonColes;
    double xi = 0.0;
    double optimizer_tolerance = 1e-7;
    int max_iterations = 500;
    int min_matches_per_team = 4;
    // Stage-2 full-vector local refinement; capped, never regresses.
    bool polish = true;
    int polish_max_iterations = 150;
};

struct FitResult {
    ModelParams params;
    double log_likelihood = 0.0;
    bool converged = false;
    double n_effective = 0.0;  // sum of time weights
    int iterations = 0;
};

/// Weighted log (pseudo-)likelihood of either model.
double log_weighted_likelihood(const ModelParams& params,
                               std::span<const MatchRecord> matches, int t);

/// Two-stage maximization at day t over the window A_t.
/// Stage 1 fits ratings under independence (rho = 0, theta = (0,1,0)) by
/// exact coordinate ascent with the sum-alpha constraint restored after
/// each sweep. Stage 2 frees the dependence parameter(s) via simplex
/// search from the stage-1 point, then optionally refines the full vector
/// locally. Throws FitError if any window team has fewer than
/// min_matches_per_team appearances.
FitResult fit(std::span<const MatchRecord> window, int t,
              const FitConfig& config, const FitResult* warm_start = nullptr);

struct SXiResult {
    double s = 0.0;       // sum of realized-outcome log probabilities
    int n_matches = 0;    // matches actually scored
    std::vector<int> skipped_days;
};

/// Out-of-sample 1-X-2 log score of the model refit day by day with decay
/// xi. Days whose window cannot be fitted are skipped and reported.
SXiResult s_of_xi(const LeagueDataset& dataset, Model model, double xi,
                  std::span<const int> calendar, const FitConfig& config);

struct XiTuning {
    double best_xi = 0.0;
    std::vector<std::pair<double, double>> curve;  // (xi, S)
};

/// Grid argmax of s_of_xi. All grid points must score the identical match
/// set; a mismatch aborts. Ties resolve to the smallest xi.
XiTuning tune_xi(const LeagueDataset& dataset, Model model,
                 std::span<const double> grid, std::span<const int> calendar,
                 const FitConfig& config, int jobs = 1);

/// Default tuning grid: 0 to 0.02 in steps of 0.0005.
std::vector<double> default_xi_grid();

/// One fit per prediction day, warm-started from the previous day.
std::vector<std::pair<int, FitResult>> rolling_refit(
    const LeagueDataset& dataset, const FitConfig& config,
    std::span<const int> calendar);

}  // namespace goalmodels
