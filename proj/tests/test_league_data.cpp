#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "goalmodels/league_data.hpp"

using namespace goalmodels;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream f(path);
    f << content;
    return path;
}

}  // namespace

TEST_CASE("ingest maps raw rows to match records") {
    auto path = write_temp(
        "gm_raw.csv",
        "Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,Extra\n"
        "E0,16/08/14,Arsenal,Crystal Palace,2,1,x\n"
        "E0,17/08/14,Liverpool,Southampton,2,1,y\n");
    auto ds = ingest_csv(path);
    REQUIRE(ds.matches.size() == 2);
    CHECK(ds.matches[0].home_goals == 2);
    CHECK(ds.matches[0].away_goals == 1);
    CHECK(ds.matches[0].home_team == "Arsenal");
    CHECK(ds.matches[0].season == "2014-2015");
    CHECK(ds.matches[0].league == "E0");
    CHECK(ds.matches[0].t == 0);  // epoch = earliest date
    CHECK(ds.matches[1].t == 1);
    CHECK(ds.teams.size() == 4);
}

TEST_CASE("ingest handles header-only and blank-score files") {
    auto empty = write_temp("gm_empty.csv",
                            "Date,HomeTeam,AwayTeam,FTHG,FTAG\n");
    auto ds = ingest_csv(empty);
    CHECK(ds.matches.empty());
    CHECK(ds.skipped_rows == 0);

    auto blank = write_temp("gm_blank.csv",
                            "Date,HomeTeam,AwayTeam,FTHG,FTAG\n"
                            "16/08/14,A,B,,1\n");
    ds = ingest_csv(blank);
    CHECK(ds.matches.empty());
    CHECK(ds.skipped_rows == 1);
}

TEST_CASE("ingest fails on a missing required column") {
    auto path = write_temp("gm_badhdr.csv",
                           "Date,HomeTeam,AwayTeam,FTHG\n16/08/14,A,B,2\n");
    CHECK_THROWS_WITH_AS(ingest_csv(path),
                         doctest::Contains("FTAG"), IngestError);
}

TEST_CASE("ingest accepts two- and four-digit years") {
    auto path = write_temp("gm_years.csv",
                           "Date,HomeTeam,AwayTeam,FTHG,FTAG\n"
                           "16/08/2014,A,B,1,0\n"
                           "16/08/15,A,B,1,0\n");
    auto ds = ingest_csv(path);
    REQUIRE(ds.matches.size() == 2);
    CHECK(ds.matches[0].date.year == 2014);
    CHECK(ds.matches[1].date.year == 2015);
}

TEST_CASE("exact duplicate rows are skipped and counted") {
    auto path = write_temp("gm_dup.csv",
                           "Date,HomeTeam,AwayTeam,FTHG,FTAG\n"
                           "16/08/14,A,B,2,1\n"
                           "16/08/14,A,B,2,1\n");
    auto ds = ingest_csv(path);
    CHECK(ds.matches.size() == 1);
    CHECK(ds.duplicate_rows == 1);
}

TEST_CASE("canonical round trip preserves the dataset") {
    auto path = write_temp("gm_rt.csv",
                           "Div,Date,HomeTeam,AwayTeam,FTHG,FTAG\n"
                           "I1,20/09/14,Roma,Milan,3,2\n"
                           "I1,01/02/15,Milan,Roma,0,0\n");
    auto ds = ingest_csv(path);
    auto canon = (std::filesystem::temp_directory_path() / "gm_canon.csv").string();
    save_canonical(ds, canon);
    auto ds2 = load_canonical(canon);
    REQUIRE(ds2.matches.size() == ds.matches.size());
    for (std::size_t i = 0; i < ds.matches.size(); ++i) {
        const auto &a = ds.matches[i], &b = ds2.matches[i];
        CHECK(a.match_id == b.match_id);
        CHECK(a.t == b.t);
        CHECK(a.season == b.season);
        CHECK(a.home_team == b.home_team);
        CHECK(a.away_team == b.away_team);
        CHECK(a.home_goals == b.home_goals);
        CHECK(a.away_goals == b.away_goals);
        CHECK(a.league == b.league);
        CHECK(a.date == b.date);
    }
    CHECK(ds2.epoch == ds.epoch);
    CHECK(ds2.teams == ds.teams);
}

namespace {

LeagueDataset toy_dataset() {
    LeagueDataset ds;
    auto add = [&](int y, int m, int d, const char* h, const char* a) {
        MatchRecord r;
        r.date = {y, m, d};
        r.home_team = h;
        r.away_team = a;
        r.home_goals = 1;
        r.away_goals = 0;
        ds.matches.push_back(r);
    };
    add(2014, 9, 10, "A", "B");
    add(2014, 9, 20, "B", "C");
    add(2014, 11, 5, "C", "A");
    ds.finalize();
    for (std::size_t i = 0; i < ds.matches.size(); ++i)
        ds.matches[i].match_id = "m" + std::to_string(i);
    return ds;
}

}  // namespace

TEST_CASE("window takes strictly earlier matches") {
    auto ds = toy_dataset();
    CHECK(window(ds, 0).size() == 0);
    CHECK(window(ds, ds.matches.back().t + 1).size() == 3);
    // t equal to a match day excludes that day
    int second_day = ds.matches[1].t;
    CHECK(window(ds, second_day).size() == 1);
}

TEST_CASE("window is monotone in t") {
    auto ds = toy_dataset();
    std::size_t prev = 0;
    for (int t = 0; t <= ds.matches.back().t + 2; ++t) {
        auto w = window(ds, t);
        CHECK(w.size() >= prev);
        prev = w.size();
    }
}

TEST_CASE("prediction calendar applies burn-in and the month rule") {
    LeagueDataset ds;
    auto add = [&](int y, int m, int d) {
        MatchRecord r;
        r.date = {y, m, d};
        r.home_team = "A";
        r.away_team = "B";
        ds.matches.push_back(r);
    };
    // season 1
    add(2014, 9, 1);
    add(2014, 12, 1);
    // season 2: Sep, Nov, May
    add(2015, 9, 5);
    add(2015, 11, 7);
    add(2016, 5, 2);
    ds.finalize();

    CHECK_THROWS(prediction_calendar(ds, 2));  // only 2 seasons
    auto days = prediction_calendar(ds, 1);
    REQUIRE(days.size() == 1);  // only the November day survives
    CHECK(days[0] == days_from_civil({2015, 11, 7}) -
                         days_from_civil(ds.epoch));
    // every returned day has a fixture
    for (int d : days) {
        bool found = false;
        for (const auto& m : ds.matches) found |= m.t == d;
        CHECK(found);
    }
}

TEST_CASE("all-December second season keeps every distinct day in order") {
    LeagueDataset ds;
    auto add = [&](int y, int m, int d) {
        MatchRecord r;
        r.date = {y, m, d};
        r.home_team = "A";
        r.away_team = "B";
        ds.matches.push_back(r);
    };
    add(2014, 10, 1);
    add(2015, 12, 1);
    add(2015, 12, 1);
    add(2015, 12, 8);
    ds.finalize();
    auto days = prediction_calendar(ds, 1);
    REQUIRE(days.size() == 2);
    CHECK(days[0] < days[1]);
}

TEST_CASE("season label boundary is July 1") {
    CHECK(season_label({2015, 6, 30}) == "2014-2015");
    CHECK(season_label({2015, 7, 1}) == "2015-2016");
}

TEST_CASE("merge combines files in date order") {
    auto p1 = write_temp("gm_m1.csv",
                         "Date,HomeTeam,AwayTeam,FTHG,FTAG\n"
                         "20/09/14,A,B,1,0\n");
    auto p2 = write_temp("gm_m2.csv",
                         "Date,HomeTeam,AwayTeam,FTHG,FTAG\n"
                         "16/08/14,C,D,0,2\n");
    auto merged = merge({ingest_csv(p1), ingest_csv(p2)});
    REQUIRE(merged.matches.size() == 2);
    CHECK(merged.matches[0].home_team == "C");  // earlier date first
    CHECK(merged.matches[0].t == 0);
}
