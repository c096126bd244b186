#include "goalmodels/league_data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace goalmodels {

// Howard Hinnant's civil-days conversion.
long days_from_civil(const Date& d) {
    int y = d.year;
    unsigned m = d.month, dd = d.day;
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + dd - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097L + static_cast<long>(doe) - 719468L;
}

Date civil_from_days(long z) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                static_cast<int>(d)};
}

std::string to_iso(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::optional<Date> parse_iso(const std::string& s) {
    Date d;
    if (std::sscanf(s.c_str(), "%d-%d-%d", &d.year, &d.month, &d.day) != 3)
        return std::nullopt;
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
        return std::nullopt;
    return d;
}

std::string season_label(const Date& d) {
    int start = d.month >= 7 ? d.year : d.year - 1;
    return std::to_string(start) + "-" + std::to_string(start + 1);
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

std::optional<int> parse_int(const std::string& s) {
    std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    int v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size()) return std::nullopt;
    return v;
}

// Source dates are d/m/y with 2- or 4-digit years; two-digit years map
// to 2000-2069 (1970-1999 for 70-99).
std::optional<Date> parse_slash_date(const std::string& s, DateOrder order) {
    int a, b, c;
    if (std::sscanf(s.c_str(), "%d/%d/%d", &a, &b, &c) != 3) return std::nullopt;
    Date d;
    switch (order) {
        case DateOrder::DayMonthYear: d = {c, b, a}; break;
        case DateOrder::MonthDayYear: d = {c, a, b}; break;
        case DateOrder::YearMonthDay: d = {a, b, c}; break;
    }
    if (d.year < 100) d.year += d.year < 70 ? 2000 : 1900;
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
        return std::nullopt;
    return d;
}

}  // namespace

int LeagueDataset::team_id(const std::string& name) const {
    auto it = team_ids.find(name);
    if (it == team_ids.end())
        throw std::out_of_range("unknown team: " + name);
    return it->second;
}

int LeagueDataset::register_team(const std::string& name) {
    auto it = team_ids.find(name);
    if (it != team_ids.end()) return it->second;
    int id = static_cast<int>(teams.size());
    teams.push_back(name);
    team_ids.emplace(name, id);
    return id;
}

void LeagueDataset::finalize() {
    std::stable_sort(matches.begin(), matches.end(),
                     [](const MatchRecord& a, const MatchRecord& b) {
                         return days_from_civil(a.date) < days_from_civil(b.date);
                     });
    if (!matches.empty()) epoch = matches.front().date;
    long e = days_from_civil(epoch);
    teams.clear();
    team_ids.clear();
    for (auto& m : matches) {
        m.t = static_cast<int>(days_from_civil(m.date) - e);
        m.season = season_label(m.date);
        register_team(m.home_team);
        register_team(m.away_team);
    }
}

LeagueDataset ingest_csv(const std::string& path,
                         std::optional<DateOrder> date_format_hint,
                         const std::string& league_label) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IngestError("empty file: " + path);
    if (!line.empty() && line.substr(0, 3) == "\xEF\xBB\xBF") line = line.substr(3);

    auto header = split_csv_line(line);
    std::unordered_map<std::string, int> col;
    for (std::size_t i = 0; i < header.size(); ++i)
        col[trim(header[i])] = static_cast<int>(i);
    for (const char* req : {"Date", "HomeTeam", "AwayTeam", "FTHG", "FTAG"})
        if (!col.count(req))
            throw IngestError(std::string("missing required column: ") + req);
    int c_date = col["Date"], c_home = col["HomeTeam"], c_away = col["AwayTeam"];
    int c_fthg = col["FTHG"], c_ftag = col["FTAG"];
    int c_div = col.count("Div") ? col["Div"] : -1;

    DateOrder order = date_format_hint.value_or(DateOrder::DayMonthYear);

    LeagueDataset ds;
    std::set<std::string> seen;
    std::size_t row_no = 0;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        auto f = split_csv_line(line);
        auto get = [&](int i) -> std::string {
            return i >= 0 && i < static_cast<int>(f.size()) ? trim(f[i]) : "";
        };
        auto hg = parse_int(get(c_fthg));
        auto ag = parse_int(get(c_ftag));
        auto date = parse_slash_date(get(c_date), order);
        std::string home = get(c_home), away = get(c_away);
        if (!hg || !ag || !date || home.empty() || away.empty() ||
            *hg < 0 || *ag < 0 || home == away) {
            // A d/m swap that only shows up on some rows means the format
            // guess was wrong; demand a hint rather than mis-parse.
            if (!date && !date_format_hint &&
                parse_slash_date(get(c_date), DateOrder::MonthDayYear))
                throw IngestError("ambiguous date format at row " +
                                  std::to_string(row_no) +
                                  " (" + get(c_date) + "); pass a format hint");
            ++ds.skipped_rows;
            continue;
        }
        std::string key = to_iso(*date) + "|" + home + "|" + away + "|" +
                          std::to_string(*hg) + "|" + std::to_string(*ag);
        if (!seen.insert(key).second) {
            ++ds.duplicate_rows;
            continue;
        }
        MatchRecord m;
        m.date = *date;
        m.home_team = home;
        m.away_team = away;
        m.home_goals = *hg;
        m.away_goals = *ag;
        m.league = !league_label.empty() ? league_label : get(c_div);
        ds.matches.push_back(std::move(m));
    }
    ds.finalize();
    for (std::size_t i = 0; i < ds.matches.size(); ++i)
        if (ds.matches[i].match_id.empty())
            ds.matches[i].match_id = "m" + std::to_string(i);
    return ds;
}

void save_canonical(const LeagueDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IngestError("cannot write file: " + path);
    out << "match_id,t,season,home_team,away_team,home_goals,away_goals,"
           "league,date\n";
    for (const auto& m : ds.matches)
        out << m.match_id << ',' << m.t << ',' << m.season << ',' << m.home_team
            << ',' << m.away_team << ',' << m.home_goals << ',' << m.away_goals
            << ',' << m.league << ',' << to_iso(m.date) << '\n';
}

LeagueDataset load_canonical(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IngestError("empty file: " + path);
    auto header = split_csv_line(line);
    std::unordered_map<std::string, int> col;
    for (std::size_t i = 0; i < header.size(); ++i)
        col[trim(header[i])] = static_cast<int>(i);
    for (const char* req : {"match_id", "t", "season", "home_team", "away_team",
                            "home_goals", "away_goals"})
        if (!col.count(req))
            throw IngestError(std::string("missing required column: ") + req);
    LeagueDataset ds;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto f = split_csv_line(line);
        auto get = [&](const char* name) -> std::string {
            auto it = col.find(name);
            if (it == col.end() || it->second >= static_cast<int>(f.size()))
                return "";
            return trim(f[it->second]);
        };
        MatchRecord m;
        m.match_id = get("match_id");
        m.home_team = get("home_team");
        m.away_team = get("away_team");
        auto hg = parse_int(get("home_goals"));
        auto ag = parse_int(get("away_goals"));
        auto t = parse_int(get("t"));
        if (!hg || !ag || !t) {
            ++ds.skipped_rows;
            continue;
        }
        m.home_goals = *hg;
        m.away_goals = *ag;
        m.t = *t;
        m.season = get("season");
        m.league = get("league");
        if (auto d = parse_iso(get("date"))) m.date = *d;
        ds.matches.push_back(std::move(m));
    }
    if (!ds.matches.empty() && ds.matches.front().date != Date{}) {
        ds.finalize();
    } else {
        // No date column: trust the stored t and season.
        std::stable_sort(ds.matches.begin(), ds.matches.end(),
                         [](const MatchRecord& a, const MatchRecord& b) {
                             return a.t < b.t;
                         });
        for (auto& m : ds.matches) {
            ds.register_team(m.home_team);
            ds.register_team(m.away_team);
        }
    }
    return ds;
}

LeagueDataset load_dataset(const std::string& path,
                           std::optional<DateOrder> date_format_hint,
                           const std::string& league_label) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open file: " + path);
    std::string line;
    std::getline(in, line);
    in.close();
    if (line.find("match_id") != std::string::npos &&
        line.find("home_team") != std::string::npos)
        return load_canonical(path);
    return ingest_csv(path, date_format_hint, league_label);
}

LeagueDataset merge(const std::vector<LeagueDataset>& parts) {
    LeagueDataset out;
    for (const auto& p : parts) {
        out.matches.insert(out.matches.end(), p.matches.begin(),
                           p.matches.end());
        out.skipped_rows += p.skipped_rows;
        out.duplicate_rows += p.duplicate_rows;
    }
    out.finalize();
    // Re-key ids so they stay unique after the merge.
    for (std::size_t i = 0; i < out.matches.size(); ++i)
        out.matches[i].match_id = "m" + std::to_string(i);
    return out;
}

std::span<const MatchRecord> window(const LeagueDataset& ds, int t) {
    auto it = std::lower_bound(
        ds.matches.begin(), ds.matches.end(), t,
        [](const MatchRecord& m, int day) { return m.t < day; });
    return {ds.matches.data(),
            static_cast<std::size_t>(it - ds.matches.begin())};
}

std::vector<std::string> season_labels(const LeagueDataset& ds) {
    std::vector<std::string> out;
    for (const auto& m : ds.matches)
        if (out.empty() || out.back() != m.season) {
            if (std::find(out.begin(), out.end(), m.season) == out.end())
                out.push_back(m.season);
        }
    return out;
}

std::vector<int> prediction_calendar(const LeagueDataset& ds,
                                     int burn_in_seasons) {
    auto seasons = season_labels(ds);
    if (static_cast<int>(seasons.size()) < burn_in_seasons + 1)
        throw std::invalid_argument(
            "dataset spans " + std::to_string(seasons.size()) +
            " seasons; need at least " + std::to_string(burn_in_seasons + 1));
    std::set<std::string> burn(seasons.begin(),
                               seasons.begin() + burn_in_seasons);
    std::vector<int> days;
    for (const auto& m : ds.matches) {
        if (burn.count(m.season)) continue;
        int mo = m.date.month;
        if (mo >= 5 && mo <= 9) continue;  // October-April rule
        if (days.empty() || days.back() != m.t) days.push_back(m.t);
    }
    days.erase(std::unique(days.begin(), days.end()), days.end());
    return days;
}

}  // namespace goalmodels
