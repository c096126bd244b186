#pragma once

#include <array>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "goalmodels/league_data.hpp"
#include "goalmodels/ratings.hpp"

namespace goalmodels {

/// Conditional mean exp(theta1 + theta2 log rate + theta3 logit F_rate(h)).
/// The CDF is clamped to [1e-10, 1-1e-10] before the logit so large h does
/// not blow up the exponent.
double psi(const std::array<double, 3>& theta, double opponent_rate,
           int opp_goals);

/// Equally weighted mixture of the two marginal-times-conditional
/// factorizations:
///   pr_A(h,a) = Poisson(a; psi(theta, mu, h))     * Poisson(h; lambda)
///   pr_B(h,a) = Poisson(h; psi(theta, lambda, a)) * Poisson(a; mu)
double joint_pmf_marco(double lambda, double mu,
                       const std::array<double, 3>& theta, int h, int a);

/// Truncated joint pmf over {0..G}^2 with the unassigned tail recorded.
struct ScoreGrid {
    std::vector<double> probs;  // row-major, (G+1)*(G+1)
    int G = 0;
    double tail_mass = 0.0;

    double at(int h, int a) const { return probs[h * (G + 1) + a]; }
    double& at(int h, int a) { return probs[h * (G + 1) + a]; }
};

inline constexpr int kGridCap = 64;
inline constexpr int kDefaultGridBound = 15;
inline constexpr double kDefaultTailTolerance = 1e-8;

/// Grid for the selected model. If the tail mass exceeds the tolerance the
/// bound is doubled, up to the hard cap; past the cap an exception reports
/// the achieved tail mass.
ScoreGrid build_score_grid(double lambda, double mu, const ModelParams& params,
                           int G = kDefaultGridBound,
                           double tail_tolerance = kDefaultTailTolerance);

/// Weighted log-likelihood: sum_k exp(-xi (t - t_k)) log(pr_A/2 + pr_B/2),
/// with the mixture combined via a stable pairwise log-sum-exp.
double log_weighted_likelihood_marco(const ModelParams& params,
                                     std::span<const MatchRecord> matches,
                                     int t);

/// Exact draw from the mixture: a fair coin picks the factorization, then
/// marginal and conditional Poisson draws.
std::pair<int, int> sample_match(double lambda, double mu,
                                 const std::array<double, 3>& theta,
                                 std::mt19937_64& rng);

}  // namespace goalmodels
