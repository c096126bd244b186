#include "goalmodels/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "goalmodels/dixon_coles.hpp"
#include "goalmodels/parallel.hpp"
#include "goalmodels/rng.hpp"

namespace goalmodels {

double rps(std::span<const double> forecast, int realized) {
    const int r = static_cast<int>(forecast.size());
    if (r < 2) throw std::invalid_argument("rps needs at least two classes");
    if (realized < 0 || realized >= r)
        throw std::invalid_argument("realized class index out of range");
    double sum = 0.0;
    for (double p : forecast) {
        if (p < -1e-12) throw std::invalid_argument("negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw std::invalid_argument("forecast probabilities must sum to 1");
    double cum = 0.0, out = 0.0;
    for (int i = 0; i < r - 1; ++i) {
        cum += forecast[i] - (i == realized ? 1.0 : 0.0);
        out += cum * cum;
    }
    return out / (r - 1);
}

BacktestLedger backtest(const LeagueDataset& dataset,
                        std::span<const ModelSpec> models,
                        std::span<const MarketPartition> markets,
                        std::span<const int> calendar,
                        const FitConfig& config) {
    BacktestLedger ledger;
    std::vector<FitResult> prev(models.size());
    std::vector<bool> have_prev(models.size(), false);

    for (int day : calendar) {
        auto win = window(dataset, day);
        std::vector<FitResult> fits(models.size());
        bool day_ok = true;
        for (std::size_t mi = 0; mi < models.size(); ++mi) {
            FitConfig cfg = config;
            cfg.model = models[mi].model;
            cfg.xi = models[mi].xi;
            try {
                fits[mi] =
                    fit(win, day, cfg, have_prev[mi] ? &prev[mi] : nullptr);
            } catch (const FitError&) {
                day_ok = false;
                break;
            }
        }
        if (!day_ok) continue;
        for (std::size_t mi = 0; mi < models.size(); ++mi) {
            prev[mi] = fits[mi];
            have_prev[mi] = true;
        }
        int row_order = 0;
        for (const auto& m : dataset.matches) {
            if (m.t != day) continue;
            ++row_order;
            // comparability: fixture must be scorable by every model
            bool all_rated = true;
            for (const auto& f : fits)
                if (!f.params.ratings.has(m.home_team) ||
                    !f.params.ratings.has(m.away_team))
                    all_rated = false;
            if (!all_rated) {
                ledger.skipped.push_back(m.match_id);
                continue;
            }
            for (std::size_t mi = 0; mi < models.size(); ++mi) {
                const auto& p = fits[mi].params;
                auto [lambda, mu] =
                    intensities(p.ratings, m.home_team, m.away_team);
                ScoreGrid grid = build_score_grid(lambda, mu, p);
                for (const auto& mk : markets) {
                    auto fc = market_probs(grid, mk);
                    LedgerRow row;
                    row.match_id = m.match_id;
                    row.t = m.t;
                    row.row_order = row_order;
                    row.league = m.league;
                    row.market = mk.name();
                    row.model = models[mi].tag.empty()
                                    ? model_name(models[mi].model)
                                    : models[mi].tag;
                    row.realized = mk.realized_class(m.home_goals, m.away_goals);
                    row.rps_value = rps(fc.probs, row.realized);
                    row.forecast = std::move(fc.probs);
                    ledger.rows.push_back(std::move(row));
                }
            }
        }
    }
    return ledger;
}

void save_ledger(const BacktestLedger& ledger, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "match_id,t,league,market,model,probs,realized,rps\n";
    out.precision(12);
    for (const auto& r : ledger.rows) {
        out << r.match_id << ',' << r.t << ',' << r.league << ',' << r.market
            << ',' << r.model << ',';
        for (std::size_t i = 0; i < r.forecast.size(); ++i)
            out << (i ? ";" : "") << r.forecast[i];
        out << ',' << r.realized << ',' << r.rps_value << '\n';
    }
}

namespace {

// Paired (rps_a, rps_b) per match for one market, ordered by (t, row).
std::vector<std::pair<double, double>> paired_rps(const BacktestLedger& ledger,
                                                  const std::string& model_a,
                                                  const std::string& model_b,
                                                  const std::string& market) {
    struct Key {
        int t;
        int row;
        std::string id;
        bool operator<(const Key& o) const {
            return std::tie(t, row, id) < std::tie(o.t, o.row, o.id);
        }
    };
    std::map<Key, std::pair<const LedgerRow*, const LedgerRow*>> pairs;
    for (const auto& r : ledger.rows) {
        if (r.market != market) continue;
        Key k{r.t, r.row_order, r.match_id};
        if (r.model == model_a) pairs[k].first = &r;
        if (r.model == model_b) pairs[k].second = &r;
    }
    std::vector<std::pair<double, double>> out;
    for (const auto& [k, pr] : pairs) {
        if (!pr.first || !pr.second)
            throw std::invalid_argument(
                "ledger is missing one model's RPS for match " + k.id);
        out.emplace_back(pr.first->rps_value, pr.second->rps_value);
    }
    return out;
}

}  // namespace

std::vector<DiffPoint> cumulative_diff(const BacktestLedger& ledger,
                                       const std::string& model_a,
                                       const std::string& model_b,
                                       const std::string& market,
                                       const std::string& group) {
    struct Entry {
        int t;
        int row;
        std::string id;
        std::string league;
        double diff;
    };
    std::map<std::tuple<int, int, std::string>, Entry> by_key;
    for (const auto& r : ledger.rows) {
        if (r.market != market) continue;
        auto key = std::make_tuple(r.t, r.row_order, r.match_id);
        auto& e = by_key[key];
        e.t = r.t;
        e.row = r.row_order;
        e.id = r.match_id;
        e.league = r.league;
        if (r.model == model_a) e.diff += r.rps_value;
        if (r.model == model_b) e.diff -= r.rps_value;
    }
    std::map<std::string, std::pair<double, int>> running;
    std::vector<DiffPoint> series;
    for (const auto& [key, e] : by_key) {
        std::string g = group == "league" ? e.league : "";
        auto& [sum, counter] = running[g];
        sum += e.diff;
        ++counter;
        series.push_back({e.t, counter, sum, g});
    }
    return series;
}

ReshuffleReport reshuffle_test(const BacktestLedger& ledger,
                               const std::string& model_a,
                               const std::string& model_b,
                               const std::string& market, int n_b,
                               std::uint64_t seed, int jobs) {
    auto pairs = paired_rps(ledger, model_a, model_b, market);
    const int n = static_cast<int>(pairs.size());
    if (n == 0) throw std::invalid_argument("no paired RPS rows in ledger");

    std::vector<double> diffs(n);
    for (int i = 0; i < n; ++i) diffs[i] = pairs[i].first - pairs[i].second;
    double observed = std::accumulate(diffs.begin(), diffs.end(), 0.0) / n;
    // one-sided in the direction of the observed advantage
    double sign = observed >= 0.0 ? 1.0 : -1.0;

    std::vector<int> hits(n_b, 0);
    parallel_for(n_b, jobs, [&](std::size_t rep) {
        auto rng = make_rng(seed, /*stream=*/1, rep);
        std::bernoulli_distribution coin(0.5);
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += coin(rng) ? -diffs[i] : diffs[i];
        mean /= n;
        if (mean * sign >= observed * sign) hits[rep] = 1;
    });
    ReshuffleReport rep;
    rep.observed_diff = observed;
    rep.exceedance_fraction =
        static_cast<double>(std::accumulate(hits.begin(), hits.end(), 0)) / n_b;
    rep.n_b = n_b;
    rep.seed = seed;
    rep.n_matches = n;
    return rep;
}

ThetaCi bootstrap_theta_ci(const LeagueDataset& dataset, int t,
                           const FitConfig& config, int n_rep, double level,
                           std::uint64_t seed, int jobs) {
    if (n_rep < 2) throw std::invalid_argument("need at least 2 replicates");
    auto win = window(dataset, t);
    if (win.empty()) throw std::invalid_argument("empty estimation window");

    FitConfig cfg = config;
    cfg.model = Model::MarCo;
    FitResult baseline = fit(win, t, cfg);

    std::vector<double> theta3(n_rep);
    std::vector<int> ok(n_rep, 0);
    const std::size_t n = win.size();
    parallel_for(n_rep, jobs, [&](std::size_t rep) {
        auto rng = make_rng(seed, /*stream=*/2, rep);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<MatchRecord> sample(n);
        for (std::size_t i = 0; i < n; ++i) sample[i] = win[pick(rng)];
        // keep window ordering so the time weights stay meaningful
        std::sort(sample.begin(), sample.end(),
                  [](const MatchRecord& a, const MatchRecord& b) {
                      return a.t < b.t;
                  });
        try {
            FitResult fr = fit(sample, t, cfg, &baseline);
            if (fr.converged) {
                theta3[rep] = fr.params.theta[2];
                ok[rep] = 1;
            }
        } catch (const FitError&) {
        }
    });

    std::vector<double> kept;
    for (int i = 0; i < n_rep; ++i)
        if (ok[i]) kept.push_back(theta3[i]);
    ThetaCi ci;
    ci.estimate = baseline.params.theta[2];
    ci.n_rep = n_rep;
    ci.dropped = n_rep - static_cast<int>(kept.size());
    ci.warning = ci.dropped > n_rep / 10;
    if (kept.size() < 2)
        throw std::runtime_error("too few converged bootstrap replicates");
    std::sort(kept.begin(), kept.end());
    auto quantile = [&](double q) {
        double pos = q * (kept.size() - 1);
        std::size_t lo = static_cast<std::size_t>(pos);
        std::size_t hi = std::min(lo + 1, kept.size() - 1);
        double w = pos - lo;
        return (1.0 - w) * kept[lo] + w * kept[hi];
    };
    double a = (1.0 - level) / 2.0;
    ci.lower = quantile(a);
    ci.upper = quantile(1.0 - a);
    return ci;
}

}  // namespace goalmodels
