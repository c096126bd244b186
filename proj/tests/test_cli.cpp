#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    std::string cmd = std::string(GOALMODEL_BIN) + " " + args +
                      " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

fs::path fresh_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("usage errors do not crash") {
    CHECK(run("") != 0);
    CHECK(run("no-such-command") != 0);
}

TEST_CASE("simulate writes dataset, truth and manifest") {
    auto dir = fresh_dir("gm_cli_sim");
    CHECK(run("simulate --teams 8 --seasons 3 --seed 4 --out " +
              dir.string()) == 0);
    CHECK(fs::exists(dir / "dataset.csv"));
    CHECK(fs::exists(dir / "truth.json"));
    auto manifest = read_json(dir / "manifest.json");
    CHECK(manifest["command"] == "simulate");
    CHECK(manifest["config"]["teams"] == 8);
    CHECK(manifest["outputs"].size() == 2);
}

TEST_CASE("ingest converts a raw results file") {
    auto dir = fresh_dir("gm_cli_ingest");
    auto raw = dir / "raw.csv";
    std::ofstream f(raw);
    f << "Div,Date,HomeTeam,AwayTeam,FTHG,FTAG\n"
         "E0,16/08/14,Arsenal,Everton,2,1\n"
         "E0,23/08/14,Everton,Arsenal,0,0\n";
    f.close();
    CHECK(run("ingest --data " + raw.string() + " --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "dataset.csv"));
    auto manifest = read_json(dir / "manifest.json");
    CHECK(manifest["command"] == "ingest");
    CHECK(manifest["config"]["matches"] == 2);
}

TEST_CASE("missing input file exits with code 2") {
    auto dir = fresh_dir("gm_cli_err");
    CHECK(run("tune-xi --data /nonexistent.csv --out " + dir.string()) == 2);
}

TEST_CASE("simulate then tune-xi then backtest then diagnose") {
    auto dir = fresh_dir("gm_cli_pipe");
    REQUIRE(run("simulate --teams 8 --seasons 3 --seed 11 --out " +
                dir.string()) == 0);
    auto data = (dir / "dataset.csv").string();

    auto tune_dir = fresh_dir("gm_cli_tune");
    CHECK(run("tune-xi --data " + data +
              " --xi-grid 0,0.005 --burn-in-seasons 2 --out " +
              tune_dir.string()) == 0);
    std::ifstream curve(tune_dir / "s_curve.csv");
    std::string line;
    int lines = 0;
    while (std::getline(curve, line)) ++lines;
    CHECK(lines == 3);  // header + two grid points
    auto tm = read_json(tune_dir / "manifest.json");
    double best = tm["config"]["best_xi"].get<double>();
    CHECK((best == 0.0 || best == 0.005));

    auto bt_dir = fresh_dir("gm_cli_bt");
    CHECK(run("backtest --data " + data +
              " --markets 1x2,uo2.5 --burn-in-seasons 2 --n-boot 500 "
              "--seed 3 --out " +
              bt_dir.string()) == 0);
    CHECK(fs::exists(bt_dir / "ledger.csv"));
    CHECK(fs::exists(bt_dir / "cumdiff_1x2.csv"));
    CHECK(fs::exists(bt_dir / "cumdiff_uo2.5.csv"));
    auto reports = read_json(bt_dir / "reports.json");
    REQUIRE(reports["reshuffle"].size() == 2);
    for (const auto& r : reports["reshuffle"]) {
        double frac = r["exceedance_fraction"].get<double>();
        CHECK(frac >= 0.0);
        CHECK(frac <= 1.0);
        CHECK(r["n_matches"].get<int>() > 0);
    }

    auto dg_dir = fresh_dir("gm_cli_diag");
    CHECK(run("diagnose --data " + data + " --n-boot 300 --seed 5 --out " +
              dg_dir.string()) == 0);
    CHECK(fs::exists(dg_dir / "ratio_table.csv"));
    auto diag = read_json(dg_dir / "reports.json");
    REQUIRE(diag.size() == 1);
    double p = diag[0]["pearson"]["p_value"].get<double>();
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
    CHECK(diag[0]["n_matches"].get<int>() > 0);
}
