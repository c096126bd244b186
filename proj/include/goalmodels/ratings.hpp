#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace goalmodels {

/// Per-team attack/defence effects plus the home effect, all on the log
/// scale. Identifiability constraint: sum_i alpha_i = m.
struct RatingSet {
    std::vector<std::string> teams;
    std::unordered_map<std::string, int> index;
    std::vector<double> alpha;
    std::vector<double> beta;
    double gamma = 0.0;

    int m() const { return static_cast<int>(teams.size()); }

    int id(const std::string& team) const {
        auto it = index.find(team);
        if (it == index.end())
            throw std::out_of_range("unknown team: " + team);
        return it->second;
    }

    bool has(const std::string& team) const { return index.count(team) > 0; }

    int add(const std::string& team, double a = 1.0, double b = 0.0) {
        int id = m();
        teams.push_back(team);
        index.emplace(team, id);
        alpha.push_back(a);
        beta.push_back(b);
        return id;
    }

    double alpha_sum() const {
        double s = 0.0;
        for (double a : alpha) s += a;
        return s;
    }

    /// Shift along the invariant direction (alpha+c, beta-c) so that
    /// sum alpha = m. Leaves every intensity unchanged.
    void normalize() {
        if (m() == 0) return;
        double c = 1.0 - alpha_sum() / m();
        for (auto& a : alpha) a += c;
        for (auto& b : beta) b -= c;
    }
};

enum class Model { DixonColes, MarCo };

std::string model_name(Model m);
Model parse_model(const std::string& s);

/// Fitted parameters for either model. `rho` is used by the Dixon-Coles
/// dependence, `theta` by the Mar-Co one; theta = (0,1,0) and rho = 0 are
/// the shared independence point.
struct ModelParams {
    Model model = Model::DixonColes;
    RatingSet ratings;
    double rho = 0.0;
    std::array<double, 3> theta{0.0, 1.0, 0.0};
    double xi = 0.0;
};

/// Flat key-value parameter file shared by both models.
void save_params(const ModelParams& p, const std::string& path);
ModelParams load_params(const std::string& path);

}  // namespace goalmodels
