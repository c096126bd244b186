#pragma once

#include <span>
#include <string>
#include <vector>

#include "goalmodels/marco.hpp"

namespace goalmodels {

/// Betting market over the score grid. Classes are ordered: (Home, Draw,
/// Away) for 1-X-2 and (Under, Over) for total-goals thresholds.
struct MarketPartition {
    enum class Kind { OneXTwo, UnderOver };
    Kind kind = Kind::OneXTwo;
    double threshold = 2.5;  // half-integer, UnderOver only

    static MarketPartition one_x_two() { return {Kind::OneXTwo, 0.0}; }
    static MarketPartition under_over(double threshold);

    std::size_t n_classes() const { return kind == Kind::OneXTwo ? 3 : 2; }
    std::string name() const;
    std::vector<std::string> classes() const;

    /// Class index of a realized score under this partition.
    int realized_class(int home_goals, int away_goals) const;
};

MarketPartition parse_market(const std::string& name);

struct MarketForecast {
    std::string match_id;
    std::string model_tag;
    MarketPartition market;
    std::vector<double> probs;
};

/// Class probabilities as grid sums over the partition cells. Residual
/// tail mass goes to the open-ended class: Over for total-goal markets,
/// proportionally across classes for 1-X-2.
MarketForecast market_probs(const ScoreGrid& grid,
                            const MarketPartition& partition);

struct DayForecasts {
    std::vector<MarketForecast> forecasts;
    std::vector<std::string> skipped;  // match_id: reason
};

/// One forecast per fixture per market. Fixtures with an unrated team are
/// skipped with a reason, not fatal.
DayForecasts predict_day(const ModelParams& params,
                         std::span<const MatchRecord> fixtures,
                         std::span<const MarketPartition> markets,
                         int grid_bound = kDefaultGridBound,
                         double tail_tolerance = kDefaultTailTolerance);

}  // namespace goalmodels
