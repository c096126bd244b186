#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace goalmodels {

struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Date {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31
    auto operator<=>(const Date&) const = default;
};

// Days since 1970-01-01 (proleptic Gregorian).
long days_from_civil(const Date& d);
Date civil_from_days(long z);
std::string to_iso(const Date& d);
std::optional<Date> parse_iso(const std::string& s);

/// European season label for a date, with July 1 as the boundary:
/// 2014-08-16 -> "2014-2015", 2015-03-01 -> "2014-2015".
std::string season_label(const Date& d);

struct MatchRecord {
    std::string match_id;
    int t = 0;  // day index, days since dataset epoch
    Date date;
    std::string home_team;
    std::string away_team;
    int home_goals = 0;
    int away_goals = 0;
    std::string season;
    std::string league;
};

struct LeagueDataset {
    std::vector<MatchRecord> matches;  // sorted non-decreasing in t
    std::vector<std::string> teams;    // id -> name
    std::unordered_map<std::string, int> team_ids;
    Date epoch;  // earliest match date; t is relative to this
    std::size_t skipped_rows = 0;
    std::size_t duplicate_rows = 0;

    int team_id(const std::string& name) const;
    int register_team(const std::string& name);
    void finalize();  // sort by t, rebuild indices, recompute t from epoch
};

enum class DateOrder { DayMonthYear, MonthDayYear, YearMonthDay };

/// Read a raw results CSV (required columns Date, HomeTeam, AwayTeam,
/// FTHG, FTAG; extra columns ignored). Rows with unparseable scores or
/// dates are skipped and counted; exact duplicate rows likewise.
LeagueDataset ingest_csv(const std::string& path,
                         std::optional<DateOrder> date_format_hint = {},
                         const std::string& league_label = "");

/// Canonical dataset CSV: header
/// match_id,t,season,home_team,away_team,home_goals,away_goals,league,date
void save_canonical(const LeagueDataset& ds, const std::string& path);
LeagueDataset load_canonical(const std::string& path);

/// Auto-detect canonical vs raw by the header row.
LeagueDataset load_dataset(const std::string& path,
                           std::optional<DateOrder> date_format_hint = {},
                           const std::string& league_label = "");

/// Merge datasets (e.g. several seasons or leagues); re-sorts and
/// re-indexes against the combined epoch.
LeagueDataset merge(const std::vector<LeagueDataset>& parts);

/// A_t = { k : t_k < t }. Strictly earlier matches only.
std::span<const MatchRecord> window(const LeagueDataset& ds, int t);

/// Distinct match days after the first `burn_in_seasons` seasons whose
/// calendar month is October through April.
std::vector<int> prediction_calendar(const LeagueDataset& ds,
                                     int burn_in_seasons);

std::vector<std::string> season_labels(const LeagueDataset& ds);

}  // namespace goalmodels
