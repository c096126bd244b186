#include "goalmodels/dixon_coles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "goalmodels/poisson.hpp"

namespace goalmodels {

std::pair<double, double> intensities(const RatingSet& r,
                                      const std::string& home,
                                      const std::string& away) {
    int i = r.id(home);
    int j = r.id(away);
    double lambda = std::exp(r.gamma + r.alpha[i] + r.beta[j]);
    double mu = std::exp(r.alpha[j] + r.beta[i]);
    return {lambda, mu};
}

std::pair<double, double> rho_bounds(double lambda, double mu) {
    double lo = std::max(-1.0 / lambda, -1.0 / mu);
    double hi = std::min(1.0 / (lambda * mu), 1.0);
    return {lo, hi};
}

bool rho_feasible(double lambda, double mu, double rho) {
    auto [lo, hi] = rho_bounds(lambda, mu);
    return rho >= lo && rho <= hi;
}

double tau(double lambda, double mu, int h, int a, double rho) {
    if (!rho_feasible(lambda, mu, rho))
        throw std::domain_error("rho outside feasible bounds");
    if (h == 0 && a == 0) return 1.0 - lambda * mu * rho;
    if (h == 0 && a == 1) return 1.0 + lambda * rho;
    if (h == 1 && a == 0) return 1.0 + mu * rho;
    if (h == 1 && a == 1) return 1.0 - rho;
    return 1.0;
}

double joint_pmf_dc(double lambda, double mu, double rho, int h, int a) {
    return tau(lambda, mu, h, a, rho) * poisson_pmf(h, lambda) *
           poisson_pmf(a, mu);
}

double log_weighted_likelihood_dc(const ModelParams& params,
                                  std::span<const MatchRecord> matches,
                                  int t) {
    const RatingSet& r = params.ratings;
    double total = 0.0;
    for (const auto& m : matches) {
        double w = std::exp(-params.xi * (t - m.t));
        if (w < kWeightCutoff) continue;
        auto [lambda, mu] = intensities(r, m.home_team, m.away_team);
        if (!rho_feasible(lambda, mu, params.rho))
            return -std::numeric_limits<double>::infinity();
        double tv = tau(lambda, mu, m.home_goals, m.away_goals, params.rho);
        if (tv <= 0.0) return -std::numeric_limits<double>::infinity();
        total += w * (std::log(tv) + poisson_log_pmf(m.home_goals, lambda) +
                      poisson_log_pmf(m.away_goals, mu));
    }
    return total;
}

}  // namespace goalmodels
