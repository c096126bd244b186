#include "goalmodels/ratings.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace goalmodels {

std::string model_name(Model m) {
    return m == Model::DixonColes ? "dc" : "marco";
}

Model parse_model(const std::string& s) {
    if (s == "dc" || s == "dixon-coles") return Model::DixonColes;
    if (s == "marco" || s == "mar-co") return Model::MarCo;
    throw std::invalid_argument("unknown model: " + s + " (expected dc|marco)");
}

void save_params(const ModelParams& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << std::setprecision(17);
    out << "model\t" << model_name(p.model) << '\n';
    out << "gamma\t" << p.ratings.gamma << '\n';
    out << "xi\t" << p.xi << '\n';
    if (p.model == Model::DixonColes) {
        out << "rho\t" << p.rho << '\n';
    } else {
        out << "theta1\t" << p.theta[0] << '\n';
        out << "theta2\t" << p.theta[1] << '\n';
        out << "theta3\t" << p.theta[2] << '\n';
    }
    for (int i = 0; i < p.ratings.m(); ++i)
        out << "team\t" << p.ratings.teams[i] << '\t' << p.ratings.alpha[i]
            << '\t' << p.ratings.beta[i] << '\n';
}

ModelParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    ModelParams p;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string key;
        std::getline(ss, key, '\t');
        if (key == "model") {
            std::string v;
            std::getline(ss, v, '\t');
            p.model = parse_model(v);
        } else if (key == "team") {
            std::string name, a, b;
            std::getline(ss, name, '\t');
            std::getline(ss, a, '\t');
            std::getline(ss, b, '\t');
            p.ratings.add(name, std::stod(a), std::stod(b));
        } else {
            std::string v;
            std::getline(ss, v, '\t');
            double x = std::stod(v);
            if (key == "gamma") p.ratings.gamma = x;
            else if (key == "xi") p.xi = x;
            else if (key == "rho") p.rho = x;
            else if (key == "theta1") p.theta[0] = x;
            else if (key == "theta2") p.theta[1] = x;
            else if (key == "theta3") p.theta[2] = x;
            // unknown keys ignored for forward compatibility
        }
    }
    return p;
}

}  // namespace goalmodels
