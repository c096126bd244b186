#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace goalmodels {

// Log-factorial table, grown on demand. Scores never exceed the grid cap
// (64), so the table stays tiny; lgamma is the fallback past the table.
inline double log_factorial(int n) {
    static thread_local std::vector<double> table{0.0, 0.0};
    if (n < 0) return 0.0;
    if (static_cast<std::size_t>(n) >= table.size()) {
        std::size_t old = table.size();
        table.resize(n + 1);
        for (std::size_t k = old; k < table.size(); ++k)
            table[k] = table[k - 1] + std::log(static_cast<double>(k));
    }
    return table[n];
}

inline double poisson_log_pmf(int k, double rate) {
    return -rate + k * std::log(rate) - log_factorial(k);
}

inline double poisson_pmf(int k, double rate) {
    return std::exp(poisson_log_pmf(k, rate));
}

/// Exact partial sum F(h) = e^{-rate} * sum_{i<=h} rate^i / i!,
/// accumulated in the log domain term by term.
inline double poisson_cdf(double rate, int h) {
    if (h < 0) return 0.0;
    double sum = 0.0;
    for (int i = 0; i <= h; ++i) sum += poisson_pmf(i, rate);
    return sum < 1.0 ? sum : 1.0;
}

}  // namespace goalmodels
