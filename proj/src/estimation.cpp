#include "goalmodels/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "goalmodels/dixon_coles.hpp"
#include "goalmodels/marco.hpp"
#include "goalmodels/nelder_mead.hpp"
#include "goalmodels/parallel.hpp"
#include "goalmodels/poisson.hpp"
#include "goalmodels/prediction.hpp"

namespace goalmodels {

double log_weighted_likelihood(const ModelParams& params,
                               std::span<const MatchRecord> matches, int t) {
    return params.model == Model::DixonColes
               ? log_weighted_likelihood_dc(params, matches, t)
               : log_weighted_likelihood_marco(params, matches, t);
}

namespace {

constexpr double kAlphaLo = -3.0, kAlphaHi = 5.0;
constexpr double kBetaLo = -7.0, kBetaHi = 3.0;

struct WindowIndex {
    std::vector<const MatchRecord*> matches;  // weight >= cutoff only
    std::vector<double> weights;
    std::vector<int> home;  // team ids per match
    std::vector<int> away;
    std::vector<std::vector<int>> home_of;  // match indices per team
    std::vector<std::vector<int>> away_of;
    double n_effective = 0.0;
};

WindowIndex build_index(std::span<const MatchRecord> win, int t, double xi,
                        const RatingSet& r) {
    WindowIndex idx;
    idx.home_of.resize(r.m());
    idx.away_of.resize(r.m());
    for (const auto& m : win) {
        double w = std::exp(-xi * (t - m.t));
        if (w < kWeightCutoff) continue;
        int k = static_cast<int>(idx.matches.size());
        idx.matches.push_back(&m);
        idx.weights.push_back(w);
        idx.home.push_back(r.id(m.home_team));
        idx.away.push_back(r.id(m.away_team));
        idx.home_of[idx.home.back()].push_back(k);
        idx.away_of[idx.away.back()].push_back(k);
        idx.n_effective += w;
    }
    return idx;
}

double independence_ll(const WindowIndex& idx, const RatingSet& r) {
    double ll = 0.0;
    for (std::size_t k = 0; k < idx.matches.size(); ++k) {
        const auto& m = *idx.matches[k];
        double llog = r.gamma + r.alpha[idx.home[k]] + r.beta[idx.away[k]];
        double mlog = r.alpha[idx.away[k]] + r.beta[idx.home[k]];
        ll += idx.weights[k] *
              (m.home_goals * llog - std::exp(llog) -
               log_factorial(m.home_goals) + m.away_goals * mlog -
               std::exp(mlog) - log_factorial(m.away_goals));
    }
    return ll;
}

// One coordinate-ascent sweep of the weighted independence likelihood.
// Each update is the exact 1-D maximizer given the other parameters.
void sweep(const WindowIndex& idx, RatingSet& r) {
    for (int i = 0; i < r.m(); ++i) {
        double num = 0.0, den = 0.0;
        for (int k : idx.home_of[i]) {
            num += idx.weights[k] * idx.matches[k]->home_goals;
            den += idx.weights[k] * std::exp(r.gamma + r.beta[idx.away[k]]);
        }
        for (int k : idx.away_of[i]) {
            num += idx.weights[k] * idx.matches[k]->away_goals;
            den += idx.weights[k] * std::exp(r.beta[idx.home[k]]);
        }
        if (den > 0.0)
            r.alpha[i] = std::clamp(std::log(std::max(num, 1e-12) / den),
                                    kAlphaLo, kAlphaHi);
    }
    for (int i = 0; i < r.m(); ++i) {
        double num = 0.0, den = 0.0;
        for (int k : idx.away_of[i]) {
            num += idx.weights[k] * idx.matches[k]->home_goals;
            den += idx.weights[k] * std::exp(r.gamma + r.alpha[idx.home[k]]);
        }
        for (int k : idx.home_of[i]) {
            num += idx.weights[k] * idx.matches[k]->away_goals;
            den += idx.weights[k] * std::exp(r.alpha[idx.away[k]]);
        }
        if (den > 0.0)
            r.beta[i] = std::clamp(std::log(std::max(num, 1e-12) / den),
                                   kBetaLo, kBetaHi);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < idx.matches.size(); ++k) {
        num += idx.weights[k] * idx.matches[k]->home_goals;
        den += idx.weights[k] *
               std::exp(r.alpha[idx.home[k]] + r.beta[idx.away[k]]);
    }
    if (den > 0.0) r.gamma = std::log(std::max(num, 1e-12) / den);
    r.normalize();
}

std::pair<double, double> window_rho_bounds(const WindowIndex& idx,
                                            const RatingSet& r) {
    double lo = -1.0, hi = 1.0;
    for (std::size_t k = 0; k < idx.matches.size(); ++k) {
        double lambda =
            std::exp(r.gamma + r.alpha[idx.home[k]] + r.beta[idx.away[k]]);
        double mu = std::exp(r.alpha[idx.away[k]] + r.beta[idx.home[k]]);
        auto [l, h] = rho_bounds(lambda, mu);
        lo = std::max(lo, l);
        hi = std::min(hi, h);
    }
    return {lo, hi};
}

}  // namespace

FitResult fit(std::span<const MatchRecord> win, int t, const FitConfig& config,
              const FitResult* warm_start) {
    if (win.empty()) throw FitError("empty estimation window");

    // Register teams in first-appearance order; check match counts.
    RatingSet ratings;
    std::vector<int> counts;
    for (const auto& m : win) {
        for (const std::string* name : {&m.home_team, &m.away_team}) {
            if (!ratings.has(*name)) {
                ratings.add(*name);
                counts.push_back(0);
            }
            ++counts[ratings.id(*name)];
        }
    }
    {
        std::ostringstream low;
        for (int i = 0; i < ratings.m(); ++i)
            if (counts[i] < config.min_matches_per_team)
                low << (low.tellp() > 0 ? ", " : "") << ratings.teams[i] << " ("
                    << counts[i] << ")";
        if (low.tellp() > 0)
            throw FitError("teams below match threshold: " + low.str());
    }

    // Starting point: warm values where available, neutral otherwise.
    ratings.gamma = 0.3;
    double warm_beta_mean = -0.9;
    if (warm_start) {
        const RatingSet& w = warm_start->params.ratings;
        if (w.m() > 0) {
            double s = 0.0;
            for (double b : w.beta) s += b;
            warm_beta_mean = s / w.m();
        }
        ratings.gamma = w.gamma;
    }
    for (int i = 0; i < ratings.m(); ++i) {
        ratings.beta[i] = warm_beta_mean;
        if (warm_start && warm_start->params.ratings.has(ratings.teams[i])) {
            int j = warm_start->params.ratings.id(ratings.teams[i]);
            ratings.alpha[i] = warm_start->params.ratings.alpha[j];
            ratings.beta[i] = warm_start->params.ratings.beta[j];
        }
    }
    ratings.normalize();

    WindowIndex idx = build_index(win, t, config.xi, ratings);
    if (idx.matches.empty())
        throw FitError("no matches above the weight cutoff in window");

    FitResult res;
    res.n_effective = idx.n_effective;

    // Stage 1: independence ratings by exact coordinate ascent.
    double ll = independence_ll(idx, ratings);
    bool stage1_converged = false;
    int sweeps = 0;
    for (; sweeps < config.max_iterations; ++sweeps) {
        sweep(idx, ratings);
        double next = independence_ll(idx, ratings);
        if (next - ll < config.optimizer_tolerance * std::max(1.0, std::abs(ll))) {
            ll = next;
            stage1_converged = true;
            break;
        }
        ll = next;
    }

    ModelParams params;
    params.model = config.model;
    params.ratings = ratings;
    params.xi = config.xi;
    params.rho = 0.0;
    params.theta = {0.0, 1.0, 0.0};

    // Stage 2: free the dependence parameter(s) from the independence
    // point. Two extra coordinates travel along: a home-effect shift and a
    // uniform defence shift. Dependence distorts the marginal rates the
    // stage-1 independence fit matched, and those two directions are where
    // the distortion lands (any uniform rate correction is spanned by
    // them); at independence their optimum is zero, so nothing is lost.
    auto shifted = [&](const ModelParams& base, double dgamma,
                       double dbeta) {
        ModelParams p = base;
        p.ratings.gamma += dgamma;
        for (double& b : p.ratings.beta) b += dbeta;
        return p;
    };
    bool stage2_converged = true;
    int nm_iters = 0;
    double best_ll = log_weighted_likelihood(params, win, t);
    if (config.model == Model::DixonColes) {
        auto [lo, hi] = window_rho_bounds(idx, ratings);
        auto objective = [&](const std::vector<double>& x) {
            ModelParams p = shifted(params, x[1], x[2]);
            p.rho = x[0];
            // infeasible rho hits the likelihood's -inf sentinel
            return log_weighted_likelihood(p, win, t);
        };
        double step = std::min(0.05, 0.25 * std::min(hi, -lo));
        auto nm = nelder_mead_maximize(objective, {0.0, 0.0, 0.0}, step,
                                       config.optimizer_tolerance,
                                       config.max_iterations);
        double range = hi - lo;
        if (std::min(nm.x[0] - lo, hi - nm.x[0]) < 1e-6 * range) {
            // boundary stop: restart from an interior point
            auto nm2 = nelder_mead_maximize(
                objective,
                {0.8 * (nm.x[0] < 0.5 * (lo + hi) ? lo : hi), nm.x[1],
                 nm.x[2]},
                0.5 * step, config.optimizer_tolerance, config.max_iterations);
            if (nm2.value > nm.value) nm = nm2;
        }
        nm_iters = nm.iterations;
        stage2_converged = nm.converged;
        if (nm.value >= best_ll) {
            params = shifted(params, nm.x[1], nm.x[2]);
            params.rho = nm.x[0];
            best_ll = nm.value;
        }
    } else {
        // First free theta3 together with the two rate corrections, keeping
        // theta1 = 0 and theta2 = 1. Freeing theta1 at the same time as the
        // uniform shifts is dangerous: together they parametrize
        // mean-preserving overdispersed mixtures, a weakly identified ridge
        // that chance overdispersion in the window can drag the ratings
        // along. With theta1, theta2 pinned the corrections are uniquely
        // identified.
        auto objective3 = [&](const std::vector<double>& x) {
            ModelParams p = shifted(params, x[1], x[2]);
            p.theta = {0.0, 1.0, x[0]};
            return log_weighted_likelihood(p, win, t);
        };
        auto nm = nelder_mead_maximize(objective3, {0.0, 0.0, 0.0}, 0.05,
                                       config.optimizer_tolerance,
                                       config.max_iterations);
        nm_iters = nm.iterations;
        stage2_converged = nm.converged;
        if (nm.value >= best_ll) {
            params = shifted(params, nm.x[1], nm.x[2]);
            params.theta = {0.0, 1.0, nm.x[0]};
            best_ll = nm.value;
        }
        // Then free the full theta with everything else frozen. Marginal
        // rates cannot move here, so the ridge above stays out of reach.
        auto objective_full = [&](const std::vector<double>& x) {
            ModelParams p = params;
            p.theta = {x[0], x[1], x[2]};
            return log_weighted_likelihood(p, win, t);
        };
        auto nm2 = nelder_mead_maximize(
            objective_full,
            {params.theta[0], params.theta[1], params.theta[2]}, 0.02,
            config.optimizer_tolerance, config.max_iterations);
        nm_iters += nm2.iterations;
        stage2_converged = stage2_converged && nm2.converged;
        if (nm2.value >= best_ll) {
            params.theta = {nm2.x[0], nm2.x[1], nm2.x[2]};
            best_ll = nm2.value;
        }
    }

    // Optional local refinement of the full vector. The constraint is kept
    // by optimizing m-1 alphas and recovering the last one.
    int polish_iters = 0;
    if (config.polish && ratings.m() >= 2) {
        const int m = ratings.m();
        int ndep = config.model == Model::DixonColes ? 1 : 3;
        std::vector<double> x;
        x.reserve(2 * m + ndep);
        for (int i = 0; i < m - 1; ++i) x.push_back(params.ratings.alpha[i]);
        for (int i = 0; i < m; ++i) x.push_back(params.ratings.beta[i]);
        x.push_back(params.ratings.gamma);
        if (ndep == 1)
            x.push_back(params.rho);
        else
            x.insert(x.end(), params.theta.begin(), params.theta.end());

        auto unpack = [&](const std::vector<double>& v) {
            ModelParams p = params;
            double asum = 0.0;
            for (int i = 0; i < m - 1; ++i) {
                p.ratings.alpha[i] = v[i];
                asum += v[i];
            }
            p.ratings.alpha[m - 1] = m - asum;
            for (int i = 0; i < m; ++i) p.ratings.beta[i] = v[m - 1 + i];
            p.ratings.gamma = v[2 * m - 1];
            if (ndep == 1)
                p.rho = v[2 * m];
            else
                p.theta = {v[2 * m], v[2 * m + 1], v[2 * m + 2]};
            return p;
        };
        auto objective = [&](const std::vector<double>& v) {
            return log_weighted_likelihood(unpack(v), win, t);
        };
        auto nm = nelder_mead_maximize(objective, x, 0.01,
                                       config.optimizer_tolerance,
                                       config.polish_max_iterations);
        polish_iters = nm.iterations;
        if (nm.value > best_ll) {
            params = unpack(nm.x);
            best_ll = nm.value;
        }
    }

    res.params = std::move(params);
    res.log_likelihood = best_ll;
    res.converged = stage1_converged && stage2_converged;
    res.iterations = sweeps + nm_iters + polish_iters;
    return res;
}

SXiResult s_of_xi(const LeagueDataset& dataset, Model model, double xi,
                  std::span<const int> calendar, const FitConfig& config) {
    FitConfig cfg = config;
    cfg.model = model;
    cfg.xi = xi;
    SXiResult out;
    FitResult prev;
    bool have_prev = false;
    auto partition = MarketPartition::one_x_two();
    for (int day : calendar) {
        auto win = window(dataset, day);
        FitResult fr;
        try {
            fr = fit(win, day, cfg, have_prev ? &prev : nullptr);
        } catch (const FitError&) {
            out.skipped_days.push_back(day);
            continue;
        }
        for (const auto& m : dataset.matches) {
            if (m.t != day) continue;
            if (!fr.params.ratings.has(m.home_team) ||
                !fr.params.ratings.has(m.away_team))
                continue;
            auto [lambda, mu] =
                intensities(fr.params.ratings, m.home_team, m.away_team);
            ScoreGrid grid = build_score_grid(lambda, mu, fr.params);
            auto fc = market_probs(grid, partition);
            int r = partition.realized_class(m.home_goals, m.away_goals);
            out.s += std::log(std::max(fc.probs[r], 1e-300));
            ++out.n_matches;
        }
        prev = std::move(fr);
        have_prev = true;
    }
    return out;
}

std::vector<double> default_xi_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 40; ++i) g.push_back(i * 0.0005);
    return g;
}

XiTuning tune_xi(const LeagueDataset& dataset, Model model,
                 std::span<const double> grid, std::span<const int> calendar,
                 const FitConfig& config, int jobs) {
    if (grid.empty()) throw std::invalid_argument("empty xi grid");
    std::vector<SXiResult> results(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t i) {
        results[i] = s_of_xi(dataset, model, grid[i], calendar, config);
    });
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].n_matches != results[0].n_matches ||
            results[i].skipped_days != results[0].skipped_days)
            throw std::runtime_error(
                "xi grid points scored different match sets; comparison "
                "aborted");
    XiTuning tuning;
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        tuning.curve.emplace_back(grid[i], results[i].s);
        if (results[i].s > results[best].s) best = i;
    }
    tuning.best_xi = grid[best];
    return tuning;
}

std::vector<std::pair<int, FitResult>> rolling_refit(
    const LeagueDataset& dataset, const FitConfig& config,
    std::span<const int> calendar) {
    std::vector<std::pair<int, FitResult>> out;
    const FitResult* warm = nullptr;
    for (int day : calendar) {
        auto win = window(dataset, day);
        out.emplace_back(day, fit(win, day, config, warm));
        warm = &out.back().second;
    }
    return out;
}

}  // namespace goalmodels
