// Timing comparison between the serial reference path (jobs = 1) and the
// OpenMP path (jobs = all cores) for the replicate-heavy routines. Results
// must match bit for bit; this binary also asserts that.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "goalmodels/diagnostics.hpp"
#include "goalmodels/evaluation.hpp"
#include "goalmodels/parallel.hpp"
#include "goalmodels/simulate.hpp"

using namespace goalmodels;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

template <typename Fn>
void bench(const char* name, Fn&& fn) {
    auto t0 = clock_type::now();
    auto serial = fn(1);
    double ts = seconds_since(t0);
    t0 = clock_type::now();
    auto parallel = fn(0);  // all cores
    double tp = seconds_since(t0);
    if (serial != parallel) {
        std::fprintf(stderr, "%s: serial and parallel results differ!\n", name);
        std::exit(1);
    }
    std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %.2fx\n",
                name, ts, tp, ts / tp);
}

}  // namespace

int main() {
    std::printf("cores available: %d\n\n", hardware_jobs());

    SimScenario sc;
    sc.m = 20;
    sc.seasons = 5;
    sc.model = Model::MarCo;
    sc.theta = {0.0, 1.0, -0.08};
    sc.seed = 7;
    SimResult sim = generate(sc);
    const LeagueDataset& ds = sim.dataset;

    bench("pearson_independence_test", [&](int jobs) {
        auto r = pearson_independence_test(ds, 20000, 1, jobs);
        return r.p_value;
    });
    bench("ratio_table", [&](int jobs) {
        auto t = ratio_table(ds, 4000, 1, 4, jobs);
        double sum = 0;
        for (const auto& c : t.cells) sum += c.ratio.value_or(0.0) + c.se;
        return sum;
    });
    bench("spearman_curve", [&](int jobs) {
        auto c = spearman_curve(std::vector<double>{-0.1, 0.0, 0.1}, 0.0, 1.0,
                                1.25, 1.75, 250, 1000, 1, jobs);
        return c[0].mean + c[1].mean + c[2].mean;
    });
    bench("bootstrap_theta_ci", [&](int jobs) {
        FitConfig cfg;
        cfg.polish = false;
        auto ci = bootstrap_theta_ci(ds, ds.matches.back().t + 1, cfg, 60,
                                     0.95, 1, jobs);
        return ci.lower + ci.upper;
    });
    return 0;
}
