#include "goalmodels/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "goalmodels/marco.hpp"
#include "goalmodels/parallel.hpp"
#include "goalmodels/poisson.hpp"
#include "goalmodels/rng.hpp"

namespace goalmodels {

namespace {

std::pair<std::vector<int>, std::vector<int>> score_columns(
    const LeagueDataset& ds) {
    std::vector<int> x, y;
    x.reserve(ds.matches.size());
    y.reserve(ds.matches.size());
    for (const auto& m : ds.matches) {
        x.push_back(m.home_goals);
        y.push_back(m.away_goals);
    }
    return {x, y};
}

double pearson(std::span<const int> x, std::span<const int> y) {
    const std::size_t n = x.size();
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("zero variance in a score margin");
    return sxy / std::sqrt(sxx * syy);
}

double finite_resample_p(std::span<const int> hits, int n_rep) {
    int h = std::accumulate(hits.begin(), hits.end(), 0);
    return (1.0 + h) / (1.0 + n_rep);
}

}  // namespace

TestReport pearson_independence_test(const LeagueDataset& dataset, int n_rep,
                                     std::uint64_t seed, int jobs) {
    auto [x, y] = score_columns(dataset);
    if (x.size() < 2) throw std::invalid_argument("need at least 2 matches");
    double observed = pearson(x, y);

    std::vector<int> hits(n_rep, 0);
    parallel_for(n_rep, jobs, [&, &x = x, &y = y](std::size_t rep) {
        auto rng = make_rng(seed, /*stream=*/10, rep);
        std::vector<int> yp = y;
        std::shuffle(yp.begin(), yp.end(), rng);
        if (std::abs(pearson(x, yp)) >= std::abs(observed)) hits[rep] = 1;
    });
    TestReport r;
    r.name = "pearson_independence";
    r.statistic = observed;
    r.p_value = finite_resample_p(hits, n_rep);
    r.n_replicates = n_rep;
    r.seed = seed;
    r.notes = kAggregationCaveat;
    return r;
}

TestReport collapsed_independence_test(const LeagueDataset& dataset, int n_rep,
                                       std::uint64_t seed, int jobs) {
    auto [x, y] = score_columns(dataset);
    if (x.size() < 2) throw std::invalid_argument("need at least 2 matches");
    for (auto& v : x) v = std::max(1, v);
    for (auto& v : y) v = std::max(1, v);
    double observed = pearson(x, y);

    const std::size_t n = x.size();
    std::vector<int> hits(n_rep, 0);
    parallel_for(n_rep, jobs, [&, &x = x, &y = y](std::size_t rep) {
        auto rng = make_rng(seed, /*stream=*/11, rep);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<int> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = x[pick(rng)];  // margins resampled independently
            ys[i] = y[pick(rng)];
        }
        if (pearson(xs, ys) <= observed) hits[rep] = 1;  // left tail
    });
    TestReport r;
    r.name = "collapsed_independence";
    r.statistic = observed;
    r.p_value = finite_resample_p(hits, n_rep);
    r.n_replicates = n_rep;
    r.seed = seed;
    r.notes = kAggregationCaveat;
    return r;
}

namespace {

// ratio(h,a) = f_xy(h,a) / (f_x(h) f_y(a)), x100, over cells 0..max_goals.
std::vector<std::optional<double>> ratio_cells(std::span<const int> x,
                                               std::span<const int> y,
                                               int max_goals) {
    const int g = max_goals + 1;
    const double n = static_cast<double>(x.size());
    std::vector<double> joint(g * g, 0.0), fx(g, 0.0), fy(g, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= max_goals) fx[x[i]] += 1.0 / n;
        if (y[i] <= max_goals) fy[y[i]] += 1.0 / n;
        if (x[i] <= max_goals && y[i] <= max_goals)
            joint[x[i] * g + y[i]] += 1.0 / n;
    }
    std::vector<std::optional<double>> out(g * g);
    for (int h = 0; h < g; ++h)
        for (int a = 0; a < g; ++a)
            if (joint[h * g + a] > 0.0 && fx[h] > 0.0 && fy[a] > 0.0)
                out[h * g + a] = 100.0 * joint[h * g + a] / (fx[h] * fy[a]);
    return out;
}

}  // namespace

RatioTable ratio_table(const LeagueDataset& dataset, int n_rep,
                       std::uint64_t seed, int max_goals, int jobs) {
    auto [x, y] = score_columns(dataset);
    if (x.empty()) throw std::invalid_argument("empty dataset");
    const int g = max_goals + 1;
    auto observed = ratio_cells(x, y, max_goals);

    // bootstrap SEs from case resampling
    std::vector<std::vector<std::optional<double>>> reps(n_rep);
    const std::size_t n = x.size();
    parallel_for(n_rep, jobs, [&, &x = x, &y = y](std::size_t rep) {
        auto rng = make_rng(seed, /*stream=*/12, rep);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<int> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t k = pick(rng);
            xs[i] = x[k];
            ys[i] = y[k];
        }
        reps[rep] = ratio_cells(xs, ys, max_goals);
    });

    RatioTable table;
    table.max_goals = max_goals;
    table.cells.resize(g * g);
    table.n_rep = n_rep;
    table.seed = seed;
    for (int c = 0; c < g * g; ++c) {
        if (!observed[c]) continue;
        std::vector<double> vals;
        for (const auto& rep : reps)
            if (rep[c]) vals.push_back(*rep[c]);
        RatioCell cell;
        cell.ratio = observed[c];
        if (vals.size() >= 2) {
            double mean =
                std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
            double ss = 0.0;
            for (double v : vals) ss += (v - mean) * (v - mean);
            cell.se = std::sqrt(ss / (vals.size() - 1));
        }
        cell.significant =
            cell.se > 0.0 && std::abs(*cell.ratio - 100.0) > 1.96 * cell.se;
        table.cells[c] = cell;
    }
    return table;
}

void save_ratio_table_csv(const RatioTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "home_goals";
    for (int a = 0; a <= table.max_goals; ++a) out << ",away_" << a;
    out << '\n';
    char buf[64];
    for (int h = 0; h <= table.max_goals; ++h) {
        out << h;
        for (int a = 0; a <= table.max_goals; ++a) {
            const auto& c = table.at(h, a);
            if (c.ratio) {
                std::snprintf(buf, sizeof(buf), "%.2f (%.2f)%s", *c.ratio,
                              c.se, c.significant ? "*" : "");
                out << ',' << buf;
            } else {
                out << ",-";
            }
        }
        out << '\n';
    }
}

TestReport dispersion_test(std::span<const int> counts, int n_rep,
                           std::uint64_t seed, int jobs) {
    const std::size_t n = counts.size();
    if (n < 2) throw std::invalid_argument("need at least 2 observations");
    double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / n;
    if (mean <= 0.0) throw std::invalid_argument("sample mean must be > 0");
    auto dispersion = [](std::span<const int> v, double m) {
        double ss = 0.0;
        for (int c : v) ss += (c - m) * (c - m);
        return ss / (v.size() - 1) / m;
    };
    double observed = dispersion(counts, mean);

    std::vector<int> hits(n_rep, 0);
    parallel_for(n_rep, jobs, [&](std::size_t rep) {
        auto rng = make_rng(seed, /*stream=*/13, rep);
        std::poisson_distribution<int> pois(mean);
        std::vector<int> sim(n);
        for (auto& v : sim) v = pois(rng);
        double m = std::accumulate(sim.begin(), sim.end(), 0.0) / n;
        if (m > 0.0 && dispersion(sim, m) >= observed) hits[rep] = 1;
    });
    TestReport r;
    r.name = "dispersion";
    r.statistic = observed;
    r.p_value = finite_resample_p(hits, n_rep);
    r.n_replicates = n_rep;
    r.seed = seed;
    r.notes = kAggregationCaveat;
    return r;
}

namespace {

// KL divergence between empirical counts and Poisson(mean of the counts),
// over the observed support.
double kl_to_poisson(std::span<const int> counts) {
    const double n = static_cast<double>(counts.size());
    double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / n;
    int maxc = *std::max_element(counts.begin(), counts.end());
    std::vector<double> freq(maxc + 1, 0.0);
    for (int c : counts) freq[c] += 1.0 / n;
    double kl = 0.0;
    for (int h = 0; h <= maxc; ++h)
        if (freq[h] > 0.0)
            kl += freq[h] * (std::log(freq[h]) - poisson_log_pmf(h, mean));
    return kl;
}

}  // namespace

TestReport kl_poisson_test(std::span<const int> counts, int n_rep,
                           std::uint64_t seed, int jobs) {
    const std::size_t n = counts.size();
    if (n < 2) throw std::invalid_argument("need at least 2 observations");
    double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / n;
    if (mean <= 0.0) throw std::invalid_argument("sample mean must be > 0");
    double observed = kl_to_poisson(counts);

    std::vector<int> hits(n_rep, 0);
    parallel_for(n_rep, jobs, [&](std::size_t rep) {
        auto rng = make_rng(seed, /*stream=*/14, rep);
        std::poisson_distribution<int> pois(mean);
        std::vector<int> sim(n);
        for (auto& v : sim) v = pois(rng);
        if (kl_to_poisson(sim) >= observed) hits[rep] = 1;
    });
    TestReport r;
    r.name = "kl_poisson";
    r.statistic = observed;
    r.p_value = finite_resample_p(hits, n_rep);
    r.n_replicates = n_rep;
    r.seed = seed;
    r.notes = kAggregationCaveat;
    return r;
}

double spearman(std::span<const int> x, std::span<const int> y) {
    auto ranks = [](std::span<const int> v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            double avg = 0.5 * (i + j) + 1.0;  // average rank for ties
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    auto rx = ranks(x);
    auto ry = ranks(y);
    const std::size_t n = rx.size();
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

std::vector<SpearmanPoint> spearman_curve(std::span<const double> theta3_grid,
                                          double theta1, double theta2,
                                          double lambda, double mu, int n_rep,
                                          int sample_size, std::uint64_t seed,
                                          int jobs) {
    std::vector<SpearmanPoint> curve(theta3_grid.size());
    for (std::size_t gi = 0; gi < theta3_grid.size(); ++gi) {
        std::array<double, 3> theta{theta1, theta2, theta3_grid[gi]};
        std::vector<double> rhos(n_rep);
        parallel_for(n_rep, jobs, [&](std::size_t rep) {
            auto rng = make_rng(seed, /*stream=*/15 + gi, rep);
            std::vector<int> h(sample_size), a(sample_size);
            for (int i = 0; i < sample_size; ++i)
                std::tie(h[i], a[i]) = sample_match(lambda, mu, theta, rng);
            rhos[rep] = spearman(h, a);
        });
        std::sort(rhos.begin(), rhos.end());
        SpearmanPoint p;
        p.theta3 = theta3_grid[gi];
        p.mean = std::accumulate(rhos.begin(), rhos.end(), 0.0) / n_rep;
        p.lo = rhos[static_cast<std::size_t>(0.025 * (n_rep - 1))];
        p.hi = rhos[static_cast<std::size_t>(0.975 * (n_rep - 1))];
        curve[gi] = p;
    }
    return curve;
}

}  // namespace goalmodels
