#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "goalmodels/league_data.hpp"
#include "goalmodels/ratings.hpp"

namespace goalmodels {

/// Synthetic league: m teams, double round robin per season, rounds spaced
/// weekly over a synthetic August-May calendar.
struct SimScenario {
    int m = 20;
    int seasons = 3;
    enum class Trajectory { Static, SeasonRandomWalk };
    Trajectory trajectory = Trajectory::Static;
    double walk_step = 0.0;  // per-season random-walk scale
    Model model = Model::DixonColes;
    double rho = 0.0;
    std::array<double, 3> theta{0.0, 1.0, 0.0};
    double gamma = std::log(1.4);
    double rating_sd = 0.2;  // spread of the generated alpha/beta
    std::uint64_t seed = 0;
    std::string league_label = "SIM";
};

struct SimResult {
    LeagueDataset dataset;
    std::vector<RatingSet> truth_per_season;  // generating ratings
    SimScenario scenario;
};

/// Draw a league: true ratings per season, fixtures via the circle method,
/// scores drawn exactly from the scenario's joint pmf.
SimResult generate(const SimScenario& scenario);

void save_truth_json(const SimResult& sim, const std::string& path);

}  // namespace goalmodels
