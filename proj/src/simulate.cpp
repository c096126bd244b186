#include "goalmodels/simulate.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "goalmodels/dixon_coles.hpp"
#include "goalmodels/marco.hpp"
#include "goalmodels/rng.hpp"

namespace goalmodels {

namespace {

std::string team_name(int i) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "T%02d", i + 1);
    return buf;
}

RatingSet draw_ratings(const SimScenario& sc, std::mt19937_64& rng) {
    RatingSet r;
    std::normal_distribution<double> noise(0.0, sc.rating_sd);
    // Average mu around 1.1 keeps simulated scorelines at realistic levels.
    double beta_base = std::log(1.1) - 1.0;
    for (int i = 0; i < sc.m; ++i)
        r.add(team_name(i), 1.0 + noise(rng), beta_base + noise(rng));
    r.gamma = sc.gamma;
    r.normalize();
    return r;
}

void walk_ratings(RatingSet& r, double step, std::mt19937_64& rng) {
    std::normal_distribution<double> noise(0.0, step);
    for (auto& a : r.alpha) a += noise(rng);
    for (auto& b : r.beta) b += noise(rng);
    r.normalize();
}

std::pair<int, int> draw_score(const SimScenario& sc, double lambda, double mu,
                               std::mt19937_64& rng) {
    if (sc.model == Model::MarCo) return sample_match(lambda, mu, sc.theta, rng);
    // DC: inverse CDF on a grid truncated to negligible tail mass.
    ModelParams p;
    p.model = Model::DixonColes;
    p.rho = sc.rho;
    ScoreGrid grid = build_score_grid(lambda, mu, p, kDefaultGridBound, 1e-10);
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double cum = 0.0;
    for (int h = 0; h <= grid.G; ++h)
        for (int a = 0; a <= grid.G; ++a) {
            cum += grid.at(h, a);
            if (u <= cum) return {h, a};
        }
    return {grid.G, grid.G};  // tail, mass <= 1e-10
}

}  // namespace

SimResult generate(const SimScenario& sc) {
    if (sc.m < 2 || sc.m % 2 != 0)
        throw std::invalid_argument("team count must be even and >= 2");
    if (sc.seasons < 1) throw std::invalid_argument("need at least one season");

    SimResult out;
    out.scenario = sc;
    auto rng = make_rng(sc.seed, /*stream=*/20);
    RatingSet truth = draw_ratings(sc, rng);

    int match_no = 0;
    for (int s = 0; s < sc.seasons; ++s) {
        if (s > 0 && sc.trajectory == SimScenario::Trajectory::SeasonRandomWalk)
            walk_ratings(truth, sc.walk_step, rng);
        out.truth_per_season.push_back(truth);

        long season_start = days_from_civil(Date{2000 + s, 8, 15});
        const int half = sc.m - 1;  // rounds per leg, circle method
        for (int leg = 0; leg < 2; ++leg) {
            for (int round = 0; round < half; ++round) {
                long date_days = season_start + 7L * (leg * half + round);
                Date date = civil_from_days(date_days);
                for (int i = 0; i < sc.m / 2; ++i) {
                    int a, b;
                    if (i == 0) {
                        a = sc.m - 1;
                        b = round % half;
                    } else {
                        a = (round + i) % half;
                        b = (round + half - i) % half;
                    }
                    // swap venues on the second leg
                    bool a_home = ((round + i) % 2 == 0) == (leg == 0);
                    int home = a_home ? a : b;
                    int away = a_home ? b : a;

                    auto [lambda, mu] = intensities(truth, team_name(home),
                                                    team_name(away));
                    auto [hg, ag] = draw_score(sc, lambda, mu, rng);

                    MatchRecord m;
                    m.match_id = "m" + std::to_string(match_no++);
                    m.date = date;
                    m.home_team = team_name(home);
                    m.away_team = team_name(away);
                    m.home_goals = hg;
                    m.away_goals = ag;
                    m.league = sc.league_label;
                    out.dataset.matches.push_back(std::move(m));
                }
            }
        }
    }
    out.dataset.finalize();
    return out;
}

void save_truth_json(const SimResult& sim, const std::string& path) {
    nlohmann::json j;
    const auto& sc = sim.scenario;
    j["m"] = sc.m;
    j["seasons"] = sc.seasons;
    j["model"] = model_name(sc.model);
    j["gamma"] = sc.gamma;
    j["seed"] = sc.seed;
    j["trajectory"] = sc.trajectory == SimScenario::Trajectory::Static
                          ? "static"
                          : "season_random_walk";
    j["walk_step"] = sc.walk_step;
    if (sc.model == Model::DixonColes)
        j["rho"] = sc.rho;
    else
        j["theta"] = sc.theta;
    for (const auto& truth : sim.truth_per_season) {
        nlohmann::json season;
        for (int i = 0; i < truth.m(); ++i)
            season[truth.teams[i]] = {{"alpha", truth.alpha[i]},
                                      {"beta", truth.beta[i]}};
        j["ratings_per_season"].push_back(season);
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace goalmodels
