#include <doctest.h>

#include <cmath>

#include "goalmodels/dixon_coles.hpp"
#include "goalmodels/poisson.hpp"
#include "goalmodels/prediction.hpp"

using namespace goalmodels;

TEST_CASE("market partitions: names, classes, realized outcomes") {
    auto oxt = MarketPartition::one_x_two();
    CHECK(oxt.n_classes() == 3);
    CHECK(oxt.name() == "1x2");
    CHECK(oxt.classes() == std::vector<std::string>{"Home", "Draw", "Away"});
    CHECK(oxt.realized_class(2, 1) == 0);
    CHECK(oxt.realized_class(1, 1) == 1);
    CHECK(oxt.realized_class(0, 3) == 2);

    auto uo = MarketPartition::under_over(2.5);
    CHECK(uo.n_classes() == 2);
    CHECK(uo.name() == "uo2.5");
    CHECK(uo.realized_class(1, 1) == 0);
    CHECK(uo.realized_class(2, 1) == 1);

    CHECK_THROWS(MarketPartition::under_over(2.0));
    CHECK_THROWS(MarketPartition::under_over(-0.5));

    CHECK(parse_market("1x2").kind == MarketPartition::Kind::OneXTwo);
    auto p = parse_market("uo3.5");
    CHECK(p.kind == MarketPartition::Kind::UnderOver);
    CHECK(p.threshold == doctest::Approx(3.5));
    CHECK_THROWS(parse_market("asian-handicap"));
}

namespace {

ModelParams flat_dc(double rho) {
    ModelParams p;
    p.model = Model::DixonColes;
    p.ratings.add("A", 0.0, 0.0);
    p.ratings.add("B", 0.0, 0.0);
    p.ratings.gamma = 0.0;
    p.rho = rho;
    return p;
}

}  // namespace

TEST_CASE("market probabilities are partition sums over the grid") {
    auto params = flat_dc(0.0);
    auto grid = build_score_grid(1.0, 1.0, params);

    auto f = market_probs(grid, MarketPartition::one_x_two());
    REQUIRE(f.probs.size() == 3);
    // lambda = mu: home and away wins are symmetric
    CHECK(f.probs[0] == doctest::Approx(f.probs[2]).epsilon(1e-12));
    CHECK(f.probs[0] + f.probs[1] + f.probs[2] ==
          doctest::Approx(1.0).epsilon(1e-12));
    // draw mass of two independent Poisson(1): sum_k pmf(k)^2
    double draw = 0.0;
    for (int k = 0; k <= grid.G; ++k) draw += std::pow(poisson_pmf(k, 1.0), 2);
    CHECK(f.probs[1] == doctest::Approx(draw).epsilon(1e-9));

    auto u = market_probs(grid, MarketPartition::under_over(2.5));
    REQUIRE(u.probs.size() == 2);
    // h + a is Poisson(2) under independence
    CHECK(u.probs[0] == doctest::Approx(poisson_cdf(2.0, 2)).epsilon(1e-9));
    CHECK(u.probs[0] + u.probs[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dependence moves the draw probability") {
    auto grid0 = build_score_grid(1.2, 0.9, flat_dc(0.0));
    auto grid1 = build_score_grid(1.2, 0.9, flat_dc(0.15));
    double d0 = market_probs(grid0, MarketPartition::one_x_two()).probs[1];
    double d1 = market_probs(grid1, MarketPartition::one_x_two()).probs[1];
    // positive rho in the tau correction lifts 1-1 relative to 0-0/1-0/0-1
    CHECK(d1 != doctest::Approx(d0).epsilon(1e-6));
}

TEST_CASE("predict_day forecasts rated fixtures and skips unknown teams") {
    auto params = flat_dc(0.05);
    MatchRecord good;
    good.match_id = "g1";
    good.home_team = "A";
    good.away_team = "B";
    MatchRecord bad = good;
    bad.match_id = "g2";
    bad.away_team = "Newly Promoted";

    std::vector<MatchRecord> fixtures{good, bad};
    std::vector<MarketPartition> markets{MarketPartition::one_x_two(),
                                         MarketPartition::under_over(2.5)};
    auto day = predict_day(params, fixtures, markets);
    REQUIRE(day.forecasts.size() == 2);  // one per market for the good fixture
    CHECK(day.forecasts[0].match_id == "g1");
    CHECK(day.forecasts[0].market.name() == "1x2");
    CHECK(day.forecasts[1].market.name() == "uo2.5");
    for (const auto& f : day.forecasts) {
        double s = 0.0;
        for (double p : f.probs) {
            CHECK(p >= 0.0);
            s += p;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    }
    REQUIRE(day.skipped.size() == 1);
    CHECK(day.skipped[0].find("g2") != std::string::npos);
    CHECK(day.skipped[0].find("Newly Promoted") != std::string::npos);
}
