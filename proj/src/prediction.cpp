#include "goalmodels/prediction.hpp"

#include <cmath>
#include <stdexcept>

#include "goalmodels/dixon_coles.hpp"

namespace goalmodels {

MarketPartition MarketPartition::under_over(double threshold) {
    double frac = threshold - std::floor(threshold);
    if (threshold <= 0.0 || std::abs(frac - 0.5) > 1e-12)
        throw std::invalid_argument(
            "under/over threshold must be a positive half-integer");
    return {Kind::UnderOver, threshold};
}

std::string MarketPartition::name() const {
    if (kind == Kind::OneXTwo) return "1x2";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "uo%.1f", threshold);
    return buf;
}

std::vector<std::string> MarketPartition::classes() const {
    if (kind == Kind::OneXTwo) return {"Home", "Draw", "Away"};
    return {"Under", "Over"};
}

int MarketPartition::realized_class(int h, int a) const {
    if (kind == Kind::OneXTwo) return h > a ? 0 : (h == a ? 1 : 2);
    return h + a <= static_cast<int>(std::floor(threshold)) ? 0 : 1;
}

MarketPartition parse_market(const std::string& name) {
    if (name == "1x2") return MarketPartition::one_x_two();
    if (name.substr(0, 2) == "uo")
        return MarketPartition::under_over(std::stod(name.substr(2)));
    throw std::invalid_argument("unknown market: " + name +
                                " (expected 1x2|uo<threshold>)");
}

MarketForecast market_probs(const ScoreGrid& grid,
                            const MarketPartition& partition) {
    MarketForecast fc;
    fc.market = partition;
    if (partition.kind == MarketPartition::Kind::OneXTwo) {
        double ph = 0.0, pd = 0.0, pa = 0.0;
        for (int h = 0; h <= grid.G; ++h)
            for (int a = 0; a <= grid.G; ++a) {
                double p = grid.at(h, a);
                (h > a ? ph : h == a ? pd : pa) += p;
            }
        // tail split proportionally to in-grid class masses
        double total = ph + pd + pa;
        fc.probs = {ph / total, pd / total, pa / total};
    } else {
        int cap = static_cast<int>(std::floor(partition.threshold));
        double under = 0.0;
        for (int h = 0; h <= grid.G; ++h)
            for (int a = 0; a <= grid.G && h + a <= cap; ++a)
                under += grid.at(h, a);
        fc.probs = {under, 1.0 - under};  // tail belongs to Over
    }
    return fc;
}

DayForecasts predict_day(const ModelParams& params,
                         std::span<const MatchRecord> fixtures,
                         std::span<const MarketPartition> markets,
                         int grid_bound, double tail_tolerance) {
    DayForecasts out;
    for (const auto& fx : fixtures) {
        if (!params.ratings.has(fx.home_team) ||
            !params.ratings.has(fx.away_team)) {
            out.skipped.push_back(fx.match_id + ": unrated team " +
                                  (!params.ratings.has(fx.home_team)
                                       ? fx.home_team
                                       : fx.away_team));
            continue;
        }
        auto [lambda, mu] =
            intensities(params.ratings, fx.home_team, fx.away_team);
        ScoreGrid grid =
            build_score_grid(lambda, mu, params, grid_bound, tail_tolerance);
        for (const auto& mk : markets) {
            MarketForecast fc = market_probs(grid, mk);
            fc.match_id = fx.match_id;
            fc.model_tag = model_name(params.model);
            out.forecasts.push_back(std::move(fc));
        }
    }
    return out;
}

}  // namespace goalmodels
