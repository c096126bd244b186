#pragma once

#include <functional>
#include <vector>

namespace goalmodels {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;  // maximized objective
    bool converged = false;
    int iterations = 0;
};

/// Derivative-free simplex maximization. The objective may return -inf to
/// mark infeasible points; such vertices are treated as arbitrarily bad.
/// Convergence: spread of vertex values below `tolerance`.
NelderMeadResult nelder_mead_maximize(
    const std::function<double(const std::vector<double>&)>& objective,
    std::vector<double> start, double initial_step, double tolerance,
    int max_iterations);

}  // namespace goalmodels
