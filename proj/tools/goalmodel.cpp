// goalmodel: batch CLI for ingesting results, simulating leagues, tuning
// the time-decay rate, backtesting the two models, and running the
// dependence diagnostics. Every command writes a manifest.json capturing
// the configuration and seed so runs are reproducible.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "goalmodels/diagnostics.hpp"
#include "goalmodels/estimation.hpp"
#include "goalmodels/evaluation.hpp"
#include "goalmodels/league_data.hpp"
#include "goalmodels/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace goalmodels;

namespace {

constexpr const char* kVersion = "0.1.0";

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& config, const std::vector<std::string>& outputs) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["config"] = config;
    j["outputs"] = outputs;
    std::ofstream f(out_dir / "manifest.json");
    f << j.dump(2) << '\n';
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> grid;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
    return grid;
}

std::vector<MarketPartition> parse_markets(const std::string& s) {
    std::vector<MarketPartition> markets;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) markets.push_back(parse_market(tok));
    return markets;
}

json report_json(const TestReport& r) {
    return {{"name", r.name},        {"statistic", r.statistic},
            {"p_value", r.p_value},  {"n_replicates", r.n_replicates},
            {"seed", r.seed},        {"notes", r.notes}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"goals-based football match outcome models"};
    app.require_subcommand(1);

    // shared options
    std::vector<std::string> data_paths;
    std::string out_dir = "out";
    std::string model_str = "dc";
    std::string markets_str = "1x2,uo1.5,uo2.5";
    std::string date_order = "dmy";
    std::string league_label;
    std::uint64_t seed = 0;
    int jobs = 0;
    int burn_in = 1;
    double xi = 0.0;
    std::string xi_grid_str;
    int n_boot = 10000;

    auto* ingest = app.add_subcommand("ingest", "read raw results CSVs into "
                                                "the canonical dataset format");
    ingest->add_option("--data", data_paths, "input CSV file(s)")->required();
    ingest->add_option("--out", out_dir, "output directory");
    ingest->add_option("--date-order", date_order, "dmy|mdy|ymd");
    ingest->add_option("--league", league_label, "league label override");

    auto* simulate_cmd =
        app.add_subcommand("simulate", "generate a synthetic league");
    int sim_m = 20, sim_seasons = 3;
    double sim_rho = 0.0, sim_walk = 0.0, sim_gamma = std::log(1.4);
    std::string sim_theta = "0,1,0";
    simulate_cmd->add_option("--teams", sim_m, "team count (even)");
    simulate_cmd->add_option("--seasons", sim_seasons, "season count");
    simulate_cmd->add_option("--model", model_str, "dc|marco");
    simulate_cmd->add_option("--rho", sim_rho, "DC dependence");
    simulate_cmd->add_option("--theta", sim_theta, "Mar-Co theta1,theta2,theta3");
    simulate_cmd->add_option("--walk-step", sim_walk,
                             "per-season rating random-walk scale");
    simulate_cmd->add_option("--gamma", sim_gamma, "home effect (log scale)");
    simulate_cmd->add_option("--seed", seed, "root seed");
    simulate_cmd->add_option("--out", out_dir, "output directory");

    auto* tune = app.add_subcommand("tune-xi", "grid-search the decay rate");
    tune->add_option("--data", data_paths, "dataset file")->required();
    tune->add_option("--model", model_str, "dc|marco");
    tune->add_option("--xi-grid", xi_grid_str, "comma-separated grid");
    tune->add_option("--burn-in-seasons", burn_in, "seasons before scoring");
    tune->add_option("--seed", seed, "root seed");
    tune->add_option("--jobs", jobs, "worker count (0 = all cores)");
    tune->add_option("--out", out_dir, "output directory");

    auto* backtest_cmd =
        app.add_subcommand("backtest", "rolling-refit RPS comparison of the "
                                       "two models plus the reshuffle test");
    std::string xi_list = "0,0";
    bool theta_ci = false;
    int n_boot_theta = 250;
    backtest_cmd->add_option("--data", data_paths, "dataset file")->required();
    backtest_cmd->add_option("--xi", xi_list, "decay per model: dc_xi,marco_xi");
    backtest_cmd->add_option("--markets", markets_str, "e.g. 1x2,uo1.5,uo2.5");
    backtest_cmd->add_option("--burn-in-seasons", burn_in, "seasons before scoring");
    backtest_cmd->add_option("--n-boot", n_boot, "reshuffle replicates");
    backtest_cmd->add_flag("--theta-ci", theta_ci,
                           "also bootstrap a theta3 confidence interval");
    backtest_cmd->add_option("--n-boot-theta", n_boot_theta,
                             "bootstrap replicates for the theta3 interval");
    backtest_cmd->add_option("--seed", seed, "root seed");
    backtest_cmd->add_option("--jobs", jobs, "worker count (0 = all cores)");
    backtest_cmd->add_option("--out", out_dir, "output directory");

    auto* diagnose = app.add_subcommand(
        "diagnose", "dependence and Poissonity diagnostics bundle");
    bool per_league = false;
    bool with_spearman = false;
    diagnose->add_option("--data", data_paths, "dataset file")->required();
    diagnose->add_option("--n-boot", n_boot, "bootstrap replicates")
        ->default_val(1000);
    diagnose->add_flag("--per-league", per_league, "partition by league label");
    diagnose->add_flag("--spearman-curve", with_spearman,
                       "also emit the Monte Carlo Spearman curve");
    diagnose->add_option("--seed", seed, "root seed");
    diagnose->add_option("--jobs", jobs, "worker count (0 = all cores)");
    diagnose->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(out_dir);
        fs::path out(out_dir);
        int exit_code = 0;

        if (*ingest) {
            std::optional<DateOrder> order;
            if (date_order == "dmy") order = DateOrder::DayMonthYear;
            else if (date_order == "mdy") order = DateOrder::MonthDayYear;
            else if (date_order == "ymd") order = DateOrder::YearMonthDay;
            else throw IngestError("unknown date order: " + date_order);
            std::vector<LeagueDataset> parts;
            for (const auto& p : data_paths)
                parts.push_back(load_dataset(p, order, league_label));
            LeagueDataset ds = parts.size() == 1 ? parts[0] : merge(parts);
            save_canonical(ds, (out / "dataset.csv").string());
            std::cout << "ingested " << ds.matches.size() << " matches, "
                      << ds.teams.size() << " teams (skipped "
                      << ds.skipped_rows << ", duplicates "
                      << ds.duplicate_rows << ")\n";
            write_manifest(out, "ingest",
                           {{"data", data_paths},
                            {"date_order", date_order},
                            {"matches", ds.matches.size()},
                            {"skipped_rows", ds.skipped_rows},
                            {"duplicate_rows", ds.duplicate_rows}},
                           {"dataset.csv"});
        } else if (*simulate_cmd) {
            SimScenario sc;
            sc.m = sim_m;
            sc.seasons = sim_seasons;
            sc.model = parse_model(model_str);
            sc.rho = sim_rho;
            auto th = parse_grid(sim_theta);
            if (th.size() != 3)
                throw std::invalid_argument("--theta needs three values");
            sc.theta = {th[0], th[1], th[2]};
            sc.gamma = sim_gamma;
            sc.walk_step = sim_walk;
            sc.trajectory = sim_walk > 0.0
                                ? SimScenario::Trajectory::SeasonRandomWalk
                                : SimScenario::Trajectory::Static;
            sc.seed = seed;
            SimResult sim = generate(sc);
            save_canonical(sim.dataset, (out / "dataset.csv").string());
            save_truth_json(sim, (out / "truth.json").string());
            std::cout << "simulated " << sim.dataset.matches.size()
                      << " matches over " << sc.seasons << " seasons\n";
            write_manifest(out, "simulate",
                           {{"teams", sc.m},
                            {"seasons", sc.seasons},
                            {"model", model_str},
                            {"walk_step", sc.walk_step},
                            {"seed", seed}},
                           {"dataset.csv", "truth.json"});
        } else if (*tune) {
            LeagueDataset ds = load_dataset(data_paths.at(0));
            auto calendar = prediction_calendar(ds, burn_in);
            std::vector<double> grid = xi_grid_str.empty()
                                           ? default_xi_grid()
                                           : parse_grid(xi_grid_str);
            FitConfig cfg;
            cfg.polish = false;  // rating-level refits dominate the runtime
            XiTuning tuning =
                tune_xi(ds, parse_model(model_str), grid, calendar, cfg, jobs);
            std::ofstream curve(out / "s_curve.csv");
            curve << "xi,S\n";
            curve.precision(12);
            for (auto [x, s] : tuning.curve) curve << x << ',' << s << '\n';
            std::cout << "best xi = " << tuning.best_xi << '\n';
            write_manifest(out, "tune-xi",
                           {{"data", data_paths},
                            {"model", model_str},
                            {"burn_in_seasons", burn_in},
                            {"best_xi", tuning.best_xi},
                            {"seed", seed}},
                           {"s_curve.csv"});
        } else if (*backtest_cmd) {
            LeagueDataset ds = load_dataset(data_paths.at(0));
            auto calendar = prediction_calendar(ds, burn_in);
            auto xis = parse_grid(xi_list);
            if (xis.size() != 2)
                throw std::invalid_argument("--xi needs dc_xi,marco_xi");
            std::vector<ModelSpec> models = {
                {Model::DixonColes, xis[0], "dc"},
                {Model::MarCo, xis[1], "marco"}};
            auto markets = parse_markets(markets_str);
            FitConfig cfg;
            cfg.polish = false;
            BacktestLedger ledger = backtest(ds, models, markets, calendar, cfg);
            save_ledger(ledger, (out / "ledger.csv").string());

            json reports = json::array();
            for (const auto& mk : markets) {
                auto series = cumulative_diff(ledger, "dc", "marco", mk.name());
                auto by_league =
                    cumulative_diff(ledger, "dc", "marco", mk.name(), "league");
                std::ofstream f(out / ("cumdiff_" + mk.name() + ".csv"));
                f << "t,match_counter,diff,group\n";
                f.precision(12);
                for (const auto* s : {&series, &by_league})
                    for (const auto& p : *s)
                        f << p.t << ',' << p.match_counter << ',' << p.diff
                          << ',' << (p.group.empty() ? "all" : p.group) << '\n';
                auto rep = reshuffle_test(ledger, "dc", "marco", mk.name(),
                                          n_boot, seed, jobs);
                reports.push_back({{"market", mk.name()},
                                   {"observed_diff", rep.observed_diff},
                                   {"exceedance_fraction", rep.exceedance_fraction},
                                   {"n_b", rep.n_b},
                                   {"seed", rep.seed},
                                   {"n_matches", rep.n_matches}});
            }
            json bundle;
            bundle["reshuffle"] = reports;
            if (theta_ci) {
                FitConfig ci_cfg;
                ci_cfg.xi = xis[1];
                int t_end = ds.matches.back().t + 1;
                ThetaCi ci = bootstrap_theta_ci(ds, t_end, ci_cfg, n_boot_theta,
                                                0.95, seed, jobs);
                bundle["theta3_ci"] = {{"estimate", ci.estimate},
                                       {"lower", ci.lower},
                                       {"upper", ci.upper},
                                       {"n_rep", ci.n_rep},
                                       {"dropped", ci.dropped},
                                       {"warning", ci.warning}};
                if (ci.warning) exit_code = 1;
            }
            std::ofstream rf(out / "reports.json");
            rf << bundle.dump(2) << '\n';
            std::cout << "scored " << ledger.rows.size() << " ledger rows\n";
            write_manifest(out, "backtest",
                           {{"data", data_paths},
                            {"xi", xis},
                            {"markets", markets_str},
                            {"burn_in_seasons", burn_in},
                            {"n_boot", n_boot},
                            {"seed", seed}},
                           {"ledger.csv", "reports.json"});
        } else if (*diagnose) {
            LeagueDataset all = load_dataset(data_paths.at(0));
            std::vector<std::pair<std::string, LeagueDataset>> groups;
            if (per_league) {
                std::map<std::string, LeagueDataset> split;
                for (const auto& m : all.matches)
                    split[m.league].matches.push_back(m);
                for (auto& [label, ds] : split) {
                    ds.finalize();
                    groups.emplace_back(label, std::move(ds));
                }
            } else {
                groups.emplace_back("all", std::move(all));
            }
            json bundle = json::array();
            for (const auto& [label, ds] : groups) {
                std::vector<int> home, away;
                for (const auto& m : ds.matches) {
                    home.push_back(m.home_goals);
                    away.push_back(m.away_goals);
                }
                json g;
                g["group"] = label;
                g["n_matches"] = ds.matches.size();
                g["pearson"] =
                    report_json(pearson_independence_test(ds, n_boot, seed, jobs));
                g["collapsed"] = report_json(
                    collapsed_independence_test(ds, n_boot, seed, jobs));
                g["dispersion_home"] =
                    report_json(dispersion_test(home, n_boot, seed, jobs));
                g["dispersion_away"] =
                    report_json(dispersion_test(away, n_boot, seed, jobs));
                g["kl_home"] =
                    report_json(kl_poisson_test(home, n_boot, seed, jobs));
                g["kl_away"] =
                    report_json(kl_poisson_test(away, n_boot, seed, jobs));
                RatioTable table = ratio_table(ds, n_boot, seed, 4, jobs);
                std::string suffix = per_league ? "_" + label : "";
                save_ratio_table_csv(
                    table, (out / ("ratio_table" + suffix + ".csv")).string());
                bundle.push_back(g);

                std::cout << "[" << label << "] pearson r="
                          << g["pearson"]["statistic"].get<double>()
                          << " p=" << g["pearson"]["p_value"].get<double>()
                          << ", collapsed p="
                          << g["collapsed"]["p_value"].get<double>() << '\n';
            }
            if (with_spearman) {
                std::vector<double> grid;
                for (int i = -6; i <= 6; ++i) grid.push_back(i * 0.05);
                auto curve =
                    spearman_curve(grid, 0.0, 1.0, 1.25, 1.75, 250, 1000, seed, jobs);
                std::ofstream f(out / "spearman_curve.csv");
                f << "theta3,mean,lo,hi\n";
                for (const auto& p : curve)
                    f << p.theta3 << ',' << p.mean << ',' << p.lo << ',' << p.hi
                      << '\n';
            }
            std::ofstream rf(out / "reports.json");
            rf << bundle.dump(2) << '\n';
            write_manifest(out, "diagnose",
                           {{"data", data_paths},
                            {"n_boot", n_boot},
                            {"per_league", per_league},
                            {"seed", seed}},
                           {"reports.json", "ratio_table.csv"});
        }
        return exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
