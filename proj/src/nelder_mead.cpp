#include "goalmodels/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace goalmodels {

NelderMeadResult nelder_mead_maximize(
    const std::function<double(const std::vector<double>&)>& objective,
    std::vector<double> start, double initial_step, double tolerance,
    int max_iterations) {
    const std::size_t n = start.size();
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<std::vector<double>> simplex(n + 1, start);
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += initial_step;
    for (std::size_t i = 0; i <= n; ++i) values[i] = objective(simplex[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
        std::vector<std::vector<double>> s2(n + 1);
        std::vector<double> v2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            s2[i] = simplex[idx[i]];
            v2[i] = values[idx[i]];
        }
        simplex.swap(s2);
        values.swap(v2);
    };

    NelderMeadResult res;
    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        order();
        if (std::isfinite(values[0]) && std::isfinite(values[n]) &&
            values[0] - values[n] < tolerance) {
            res.converged = true;
            break;
        }
        // centroid of all but the worst vertex
        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) c[j] += simplex[i][j] / n;

        auto point = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = c[j] + coef * (simplex[n][j] - c[j]);
            return p;
        };

        auto xr = point(-1.0);
        double fr = objective(xr);
        if (fr > values[0]) {
            auto xe = point(-2.0);
            double fe = objective(xe);
            if (fe > fr) {
                simplex[n] = std::move(xe);
                values[n] = fe;
            } else {
                simplex[n] = std::move(xr);
                values[n] = fr;
            }
        } else if (fr > values[n - 1]) {
            simplex[n] = std::move(xr);
            values[n] = fr;
        } else {
            bool outside = fr > values[n];
            auto xc = point(outside ? -0.5 : 0.5);
            double fc = objective(xc);
            if (fc > (outside ? fr : values[n])) {
                simplex[n] = std::move(xc);
                values[n] = fc;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] =
                            simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    values[i] = objective(simplex[i]);
                }
            }
        }
        if (values[n] == -inf && values[0] == -inf) break;  // nowhere feasible
    }
    order();
    res.x = simplex[0];
    res.value = values[0];
    res.iterations = iter;
    return res;
}

}  // namespace goalmodels
