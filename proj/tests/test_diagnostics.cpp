#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "goalmodels/diagnostics.hpp"

using namespace goalmodels;

namespace {

LeagueDataset dataset_from_scores(
    const std::vector<std::pair<int, int>>& scores) {
    LeagueDataset ds;
    int day = 0;
    for (auto [h, a] : scores) {
        MatchRecord m;
        m.date = {2014, 8, 1};
        m.date.day = 1 + day % 28;
        m.date.month = 8 + (day / 28) % 4;
        m.home_team = "H" + std::to_string(day % 7);
        m.away_team = "A" + std::to_string(day % 7);
        m.home_goals = h;
        m.away_goals = a;
        ds.matches.push_back(m);
        ++day;
    }
    ds.finalize();
    return ds;
}

}  // namespace

TEST_CASE("spearman with and without ties") {
    std::vector<int> x{1, 2, 3, 4, 5}, y{2, 4, 6, 8, 10};
    CHECK(spearman(x, y) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<int> yr{10, 8, 6, 4, 2};
    CHECK(spearman(x, yr) == doctest::Approx(-1.0).epsilon(1e-12));

    // average ranks: x = (1.5, 1.5, 3) against y = (1, 2, 3)
    std::vector<int> xt{1, 1, 2}, yt{1, 2, 3};
    CHECK(spearman(xt, yt) == doctest::Approx(1.5 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("pearson test flags constructed dependence") {
    // hard negative coupling: away goals mirror home goals
    std::vector<std::pair<int, int>> dep;
    std::mt19937_64 rng(2);
    std::poisson_distribution<int> pois(1.3);
    for (int i = 0; i < 400; ++i) {
        int h = pois(rng);
        dep.emplace_back(h, std::max(0, 4 - h));
    }
    auto ds = dataset_from_scores(dep);
    auto rep = pearson_independence_test(ds, 999, 11);
    CHECK(rep.statistic < -0.5);
    CHECK(rep.p_value == doctest::Approx(1.0 / 1000).epsilon(1e-12));
    CHECK(rep.n_replicates == 999);
    CHECK(rep.notes == kAggregationCaveat);
}

TEST_CASE("pearson test accepts independent scores") {
    std::vector<std::pair<int, int>> ind;
    std::mt19937_64 rng(3);
    std::poisson_distribution<int> ph(1.4), pa(1.1);
    for (int i = 0; i < 600; ++i) ind.emplace_back(ph(rng), pa(rng));
    auto ds = dataset_from_scores(ind);
    auto rep = pearson_independence_test(ds, 999, 11);
    CHECK(rep.p_value > 0.01);
    CHECK(std::abs(rep.statistic) < 0.15);
}

TEST_CASE("pearson test is independent of the job count") {
    std::vector<std::pair<int, int>> ind;
    std::mt19937_64 rng(5);
    std::poisson_distribution<int> pois(1.2);
    for (int i = 0; i < 200; ++i) ind.emplace_back(pois(rng), pois(rng));
    auto ds = dataset_from_scores(ind);
    auto serial = pearson_independence_test(ds, 2000, 77, 1);
    auto parallel = pearson_independence_test(ds, 2000, 77, 0);
    CHECK(serial.p_value == parallel.p_value);
    CHECK(serial.statistic == parallel.statistic);
}

TEST_CASE("collapsed test is one-sided toward the left tail") {
    // mirrored scores stay strongly negative after max(1, x) collapsing
    std::vector<std::pair<int, int>> dep;
    std::mt19937_64 rng(7);
    std::poisson_distribution<int> pois(1.3);
    for (int i = 0; i < 500; ++i) {
        int h = pois(rng);
        dep.emplace_back(h, std::max(0, 4 - h));
    }
    auto ds = dataset_from_scores(dep);
    auto rep = collapsed_independence_test(ds, 999, 13);
    CHECK(rep.p_value < 0.05);

    // independent data should not trip it
    std::vector<std::pair<int, int>> ind;
    for (int i = 0; i < 500; ++i) ind.emplace_back(pois(rng), pois(rng));
    auto rep2 = collapsed_independence_test(dataset_from_scores(ind), 999, 13);
    CHECK(rep2.p_value > 0.01);
    CHECK(rep2.p_value <= 1.0);
}

TEST_CASE("ratio table on a two-point score distribution") {
    // half the matches 0-0, half 1-1: joint / product = 2 on the diagonal
    std::vector<std::pair<int, int>> scores;
    for (int i = 0; i < 200; ++i) scores.emplace_back(i % 2, i % 2);
    auto ds = dataset_from_scores(scores);
    auto table = ratio_table(ds, 500, 3, 4);

    REQUIRE(table.max_goals == 4);
    CHECK(table.at(0, 0).ratio.has_value());
    CHECK(*table.at(0, 0).ratio == doctest::Approx(200.0).epsilon(1e-9));
    CHECK(*table.at(1, 1).ratio == doctest::Approx(200.0).epsilon(1e-9));
    CHECK(table.at(0, 0).significant);
    CHECK(table.at(0, 0).se >= 0.0);
    // off-diagonal and high cells never occur
    CHECK(!table.at(0, 1).ratio.has_value());
    CHECK(!table.at(4, 4).ratio.has_value());

    auto path =
        (std::filesystem::temp_directory_path() / "gm_ratio.csv").string();
    save_ratio_table_csv(table, path);
    std::ifstream in(path);
    CHECK(in.good());
    std::string first;
    std::getline(in, first);
    CHECK(!first.empty());
}

TEST_CASE("ratio table is independent of the job count") {
    std::vector<std::pair<int, int>> scores;
    std::mt19937_64 rng(9);
    std::poisson_distribution<int> pois(1.4);
    for (int i = 0; i < 300; ++i) scores.emplace_back(pois(rng), pois(rng));
    auto ds = dataset_from_scores(scores);
    auto serial = ratio_table(ds, 400, 5, 4, 1);
    auto parallel = ratio_table(ds, 400, 5, 4, 0);
    for (int h = 0; h <= 4; ++h)
        for (int a = 0; a <= 4; ++a) {
            CHECK(serial.at(h, a).ratio == parallel.at(h, a).ratio);
            CHECK(serial.at(h, a).se == parallel.at(h, a).se);
        }
}

TEST_CASE("dispersion test statistic and tail behavior") {
    // 5 zeros, 5 tens: mean 5, sample variance 250/9
    std::vector<int> over{0, 0, 0, 0, 0, 10, 10, 10, 10, 10};
    auto rep = dispersion_test(over, 999, 17);
    CHECK(rep.statistic == doctest::Approx((250.0 / 9.0) / 5.0).epsilon(1e-12));
    CHECK(rep.p_value == doctest::Approx(1.0 / 1000).epsilon(1e-12));

    std::vector<int> pois_counts;
    std::mt19937_64 rng(19);
    std::poisson_distribution<int> pois(1.5);
    for (int i = 0; i < 500; ++i) pois_counts.push_back(pois(rng));
    auto rep2 = dispersion_test(pois_counts, 999, 17);
    CHECK(rep2.p_value > 0.01);
}

TEST_CASE("kl test separates empirical counts from Poisson") {
    std::vector<int> over;
    for (int i = 0; i < 100; ++i) over.push_back(i % 2 == 0 ? 0 : 6);
    auto rep = kl_poisson_test(over, 999, 23);
    CHECK(rep.statistic > 0.0);
    CHECK(rep.p_value < 0.01);

    std::vector<int> pois_counts;
    std::mt19937_64 rng(29);
    std::poisson_distribution<int> pois(1.2);
    for (int i = 0; i < 500; ++i) pois_counts.push_back(pois(rng));
    auto rep2 = kl_poisson_test(pois_counts, 999, 23);
    CHECK(rep2.p_value > 0.01);
}

TEST_CASE("spearman curve is monotone in theta3 and centered at zero") {
    std::vector<double> grid{-0.2, 0.0, 0.2};
    auto curve = spearman_curve(grid, 0.0, 1.0, 1.25, 1.75, 80, 600, 31, 0);
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].theta3 == -0.2);
    CHECK(curve[0].mean < curve[1].mean);
    CHECK(curve[1].mean < curve[2].mean);
    CHECK(std::abs(curve[1].mean) < 0.05);
    for (const auto& p : curve) {
        CHECK(p.lo <= p.mean);
        CHECK(p.mean <= p.hi);
    }

    // job-count invariance
    auto serial = spearman_curve(std::vector<double>{0.1}, 0.0, 1.0, 1.25,
                                 1.75, 40, 300, 31, 1);
    auto parallel = spearman_curve(std::vector<double>{0.1}, 0.0, 1.0, 1.25,
                                   1.75, 40, 300, 31, 0);
    CHECK(serial[0].mean == parallel[0].mean);
    CHECK(serial[0].lo == parallel[0].lo);
    CHECK(serial[0].hi == parallel[0].hi);
}
