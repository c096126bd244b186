#include "goalmodels/marco.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "goalmodels/dixon_coles.hpp"
#include "goalmodels/poisson.hpp"

namespace goalmodels {

namespace {
constexpr double kCdfClamp = 1e-10;

double logit(double p) { return std::log(p / (1.0 - p)); }

// log pr_A and log pr_B for one score pair.
double log_pr_a(double lambda, double mu, const std::array<double, 3>& theta,
                int h, int a) {
    double rate = psi(theta, mu, h);
    return poisson_log_pmf(a, rate) + poisson_log_pmf(h, lambda);
}

double log_pr_b(double lambda, double mu, const std::array<double, 3>& theta,
                int h, int a) {
    double rate = psi(theta, lambda, a);
    return poisson_log_pmf(h, rate) + poisson_log_pmf(a, mu);
}

// log(e^x/2 + e^y/2) without overflow.
double log_half_sum(double x, double y) {
    double m = std::max(x, y);
    return m + std::log(0.5 * std::exp(x - m) + 0.5 * std::exp(y - m));
}
}  // namespace

double psi(const std::array<double, 3>& theta, double opponent_rate,
           int opp_goals) {
    double f = poisson_cdf(opponent_rate, opp_goals);
    f = std::clamp(f, kCdfClamp, 1.0 - kCdfClamp);
    return std::exp(theta[0] + theta[1] * std::log(opponent_rate) +
                    theta[2] * logit(f));
}

double joint_pmf_marco(double lambda, double mu,
                       const std::array<double, 3>& theta, int h, int a) {
    return 0.5 * std::exp(log_pr_a(lambda, mu, theta, h, a)) +
           0.5 * std::exp(log_pr_b(lambda, mu, theta, h, a));
}

ScoreGrid build_score_grid(double lambda, double mu, const ModelParams& params,
                           int G, double tail_tolerance) {
    if (G < 1) throw std::invalid_argument("grid bound must be >= 1");
    double achieved = 1.0;
    for (int bound = G; bound <= kGridCap; bound *= 2) {
        ScoreGrid grid;
        grid.G = bound;
        grid.probs.assign((bound + 1) * (bound + 1), 0.0);
        double mass = 0.0;
        for (int h = 0; h <= bound; ++h)
            for (int a = 0; a <= bound; ++a) {
                double p = params.model == Model::DixonColes
                               ? joint_pmf_dc(lambda, mu, params.rho, h, a)
                               : joint_pmf_marco(lambda, mu, params.theta, h, a);
                grid.at(h, a) = p;
                mass += p;
            }
        grid.tail_mass = std::max(0.0, 1.0 - mass);
        if (grid.tail_mass <= tail_tolerance) return grid;
        achieved = grid.tail_mass;
    }
    throw std::runtime_error(
        "score grid tail mass " + std::to_string(achieved) +
        " exceeds tolerance " + std::to_string(tail_tolerance) +
        " at grid cap " + std::to_string(kGridCap));
}

double log_weighted_likelihood_marco(const ModelParams& params,
                                     std::span<const MatchRecord> matches,
                                     int t) {
    const RatingSet& r = params.ratings;
    double total = 0.0;
    for (const auto& m : matches) {
        double w = std::exp(-params.xi * (t - m.t));
        if (w < kWeightCutoff) continue;
        auto [lambda, mu] = intensities(r, m.home_team, m.away_team);
        double la = log_pr_a(lambda, mu, params.theta, m.home_goals,
                             m.away_goals);
        double lb = log_pr_b(lambda, mu, params.theta, m.home_goals,
                             m.away_goals);
        total += w * log_half_sum(la, lb);
    }
    return total;
}

std::pair<int, int> sample_match(double lambda, double mu,
                                 const std::array<double, 3>& theta,
                                 std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.5);
    if (coin(rng)) {
        int h = std::poisson_distribution<int>(lambda)(rng);
        int a = std::poisson_distribution<int>(psi(theta, mu, h))(rng);
        return {h, a};
    }
    int a = std::poisson_distribution<int>(mu)(rng);
    int h = std::poisson_distribution<int>(psi(theta, lambda, a))(rng);
    return {h, a};
}

}  // namespace goalmodels
