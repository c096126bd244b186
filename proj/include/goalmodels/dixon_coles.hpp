#pragma once

#include <span>
#include <utility>

#include "goalmodels/league_data.hpp"
#include "goalmodels/ratings.hpp"

namespace goalmodels {

/// Scoring rates for one fixture:
/// lambda = exp(gamma + alpha_home + beta_away), mu = exp(alpha_away + beta_home).
std::pair<double, double> intensities(const RatingSet& r,
                                      const std::string& home,
                                      const std::string& away);

/// Feasible rho interval for given rates:
/// [max(-1/lambda, -1/mu), min(1/(lambda*mu), 1)].
std::pair<double, double> rho_bounds(double lambda, double mu);

bool rho_feasible(double lambda, double mu, double rho);

/// Dependence adjustment on the {0,1}x{0,1} score block; 1 elsewhere.
/// Throws std::domain_error for infeasible rho.
double tau(double lambda, double mu, int h, int a, double rho);

/// tau * Poisson(h; lambda) * Poisson(a; mu).
double joint_pmf_dc(double lambda, double mu, double rho, int h, int a);

/// Weighted log pseudo-likelihood over the window at day t:
/// sum_k exp(-xi (t - t_k)) log pmf(x_k, y_k). Matches with weight below
/// 1e-6 contribute nothing. Returns -inf if rho is infeasible for any
/// contributing match (optimizer sentinel, not an exception).
double log_weighted_likelihood_dc(const ModelParams& params,
                                  std::span<const MatchRecord> matches, int t);

inline constexpr double kWeightCutoff = 1e-6;

}  // namespace goalmodels
