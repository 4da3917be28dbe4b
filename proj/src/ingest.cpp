#include "betsim/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace betsim {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = text.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    std::size_t end = text.find_last_not_of(" \t");
    return text.substr(begin, end - begin + 1);
}

}  // namespace

std::size_t CsvFile::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::invalid_argument("missing required column '" + name + "'");
}

CsvFile read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    CsvFile csv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (line.back() == ',') fields.push_back("");
        if (csv.header.empty()) {
            csv.header = fields;
            continue;
        }
        fields.resize(csv.header.size());
        csv.rows.push_back(std::move(fields));
        csv.line_numbers.push_back(line_no);
    }
    if (csv.header.empty()) throw std::runtime_error(path + ": empty file, header row required");
    return csv;
}

namespace {

using nlohmann::json;

Date parse_date_or_throw(const std::string& text, const std::string& context) {
    auto date = Date::parse(text);
    if (!date) throw std::invalid_argument(context + ": bad date '" + text + "'");
    return *date;
}

SportSchema schema_from_json(const json& j) {
    SportSchema schema;
    const std::string id = j.value("sport", "basketball");
    if (id == "basketball")
        schema = SportSchema::basketball();
    else if (id == "football")
        schema = SportSchema::football();
    else if (id != "custom")
        throw std::invalid_argument("config: unknown sport '" + id + "'");
    if (id == "custom") schema.id = "custom";

    if (j.contains("schema")) {
        const json& s = j.at("schema");
        if (s.contains("stats")) schema.stats = s.at("stats").get<std::vector<std::string>>();
        if (s.contains("possession_formula"))
            schema.possession_formula =
                s.at("possession_formula").get<std::map<std::string, double>>();
        if (s.contains("normalize_target"))
            schema.normalize_target = s.at("normalize_target").get<double>();
        if (s.contains("adjust_stats"))
            schema.adjust_stats = s.at("adjust_stats").get<std::vector<std::string>>();
        if (s.contains("scale_exempt"))
            schema.scale_exempt = s.at("scale_exempt").get<std::vector<std::string>>();
    }
    schema.validate();
    return schema;
}

PredictorSpec predictor_from_json(const json& j) {
    PredictorSpec spec;
    spec.id = j.at("id").get<std::string>();
    spec.type = j.at("type").get<std::string>();
    if (spec.id.empty() || spec.id.find_first_of("/\\ ") != std::string::npos)
        throw std::invalid_argument("config: predictor id '" + spec.id +
                                    "' must be non-empty without spaces or slashes");
    if (spec.type == "kp") {
        spec.kp.pyth_exponent = j.value("pyth_exponent", spec.kp.pyth_exponent);
        spec.kp.home_advantage = j.value("home_advantage", spec.kp.home_advantage);
    } else if (spec.type == "srs") {
        spec.srs_home_bonus = j.value("home_bonus", spec.srs_home_bonus);
    } else if (spec.type == "nb") {
        spec.nb_kernel = j.value("kernel", true);
        spec.nb_features = j.value("features", std::vector<std::string>{
                                                   "adjeff:oe", "adjeff:de", "basic:off_points_for",
                                                   "basic:def_points_for", "srs:rating"});
    } else if (spec.type == "external") {
        spec.picks_file = j.at("file").get<std::string>();
    } else {
        throw std::invalid_argument("config: predictor '" + spec.id + "' has unknown type '" +
                                    spec.type + "'");
    }
    return spec;
}

}  // namespace

SeasonConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("config " + path + ": " + e.what());
    }

    SeasonConfig config;
    config.schema = schema_from_json(j);

    if (j.contains("recency_weights")) {
        const json& w = j.at("recency_weights");
        const std::string scheme = w.value("scheme", "exponential");
        if (scheme == "exponential")
            config.weights.scheme = RecencyWeights::Scheme::exponential;
        else if (scheme == "linear")
            config.weights.scheme = RecencyWeights::Scheme::linear;
        else
            throw std::invalid_argument("config: unknown recency scheme '" + scheme + "'");
        config.weights.parameter = w.value("parameter", config.weights.parameter);
    }
    config.weights.validate();

    if (j.contains("fixed_point")) {
        const json& f = j.at("fixed_point");
        config.fixed_point.tolerance = f.value("tolerance", config.fixed_point.tolerance);
        config.fixed_point.max_iterations =
            f.value("max_iterations", config.fixed_point.max_iterations);
    }

    if (j.contains("phase_boundary"))
        config.phase_boundary =
            parse_date_or_throw(j.at("phase_boundary").get<std::string>(), "config phase_boundary");
    config.skip_days = j.value("skip_days", 0);
    if (config.skip_days < 0) throw std::invalid_argument("config: skip_days must be >= 0");

    if (j.contains("stake")) {
        const std::int64_t stake = j.at("stake").get<std::int64_t>();
        config.stake = Rational(stake);
    }
    if (!(config.stake > Rational(0)))
        throw std::invalid_argument("config: stake must be positive");

    const json& files = j.at("files");
    config.schedule_file = files.at("schedule").get<std::string>();
    config.lines_file = files.at("lines").get<std::string>();
    config.game_log_file = files.at("game_log").get<std::string>();

    if (j.contains("team_aliases"))
        config.team_aliases = j.at("team_aliases").get<std::map<std::string, std::string>>();

    if (j.contains("predictors")) {
        std::set<std::string> seen;
        for (const json& p : j.at("predictors")) {
            PredictorSpec spec = predictor_from_json(p);
            if (!seen.insert(spec.id).second)
                throw std::invalid_argument("config: duplicate predictor id '" + spec.id + "'");
            config.predictors.push_back(std::move(spec));
        }
    }
    return config;
}

std::string describe_config(const SeasonConfig& config) {
    std::ostringstream out;
    out << "sport: " << config.schema.id << "\n";
    out << "normalize_target: " << config.schema.normalize_target << "\n";
    out << "possession_formula:";
    for (const auto& [stat, coeff] : config.schema.possession_formula)
        out << " " << stat << "*" << coeff;
    out << "\n";
    out << "adjust_stats:";
    for (const std::string& stat : config.schema.adjust_stats) out << " " << stat;
    out << "\n";
    out << "recency_weights: "
        << (config.weights.scheme == RecencyWeights::Scheme::exponential ? "exponential"
                                                                         : "linear")
        << " " << config.weights.parameter << "\n";
    out << "fixed_point: tolerance " << config.fixed_point.tolerance << ", max_iterations "
        << config.fixed_point.max_iterations << "\n";
    out << "skip_days: " << config.skip_days << "\n";
    out << "stake: " << config.stake.to_string(2) << "\n";
    out << "phase_boundary: "
        << (config.phase_boundary ? config.phase_boundary->to_string() : "none") << "\n";
    out << "predictors:";
    for (const PredictorSpec& spec : config.predictors) out << " " << spec.id << "(" << spec.type << ")";
    out << "\n";
    return out.str();
}

std::string canonical_team(const std::string& raw, const SeasonConfig& config) {
    std::string name = trim(raw);
    auto it = config.team_aliases.find(name);
    return it == config.team_aliases.end() ? name : it->second;
}

std::string make_match_id(const Date& date, const std::string& away, const std::string& home) {
    return date.to_string() + "_" + away + "@" + home;
}

namespace {

bool parse_double(const std::string& text, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(text, &used);
        return used == text.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_int(const std::string& text, int& out) {
    try {
        std::size_t used = 0;
        out = std::stoi(text, &used);
        return used == text.size();
    } catch (const std::exception&) {
        return false;
    }
}

struct ScheduleRow {
    Date date;
    std::string home, away, winner;
    int home_score = 0, away_score = 0;
    Venue venue = Venue::home;
};

}  // namespace

IngestResult ingest_and_join(const SeasonConfig& config) {
    JoinReport report;
    auto reject = [&](const std::string& file, std::size_t line_no, const std::string& reason) {
        report.rejected.push_back({file, line_no, reason});
    };

    // Schedule: who played whom, when, and who won.
    CsvFile schedule_csv = read_csv(config.schedule_file);
    const std::size_t s_date = schedule_csv.column("date");
    const std::size_t s_away = schedule_csv.column("away_team");
    const std::size_t s_home = schedule_csv.column("home_team");
    const std::size_t s_away_score = schedule_csv.column("away_score");
    const std::size_t s_home_score = schedule_csv.column("home_score");
    // Optional: "venue" column with home|neutral (default home).
    std::size_t s_venue = schedule_csv.header.size();
    for (std::size_t i = 0; i < schedule_csv.header.size(); ++i)
        if (schedule_csv.header[i] == "venue") s_venue = i;

    std::vector<ScheduleRow> schedule;
    std::set<std::string> schedule_keys;
    for (std::size_t r = 0; r < schedule_csv.rows.size(); ++r) {
        const auto& row = schedule_csv.rows[r];
        const std::size_t line_no = schedule_csv.line_numbers[r];
        auto date = Date::parse(row[s_date]);
        if (!date) {
            reject(config.schedule_file, line_no, "bad date '" + row[s_date] + "'");
            continue;
        }
        ScheduleRow s;
        s.date = *date;
        s.away = canonical_team(row[s_away], config);
        s.home = canonical_team(row[s_home], config);
        if (s.away.empty() || s.home.empty() || s.away == s.home) {
            reject(config.schedule_file, line_no, "need two distinct team names");
            continue;
        }
        if (!parse_int(row[s_away_score], s.away_score) ||
            !parse_int(row[s_home_score], s.home_score)) {
            reject(config.schedule_file, line_no, "bad scores");
            continue;
        }
        if (s.home_score == s.away_score) {
            reject(config.schedule_file, line_no, "tied match is not supported");
            continue;
        }
        s.winner = s.home_score > s.away_score ? s.home : s.away;
        if (s_venue < schedule_csv.header.size() && !row[s_venue].empty()) {
            if (row[s_venue] == "neutral")
                s.venue = Venue::neutral;
            else if (row[s_venue] != "home") {
                reject(config.schedule_file, line_no,
                       "schedule venue must be 'home' or 'neutral'");
                continue;
            }
        }
        const std::string key = make_match_id(s.date, s.away, s.home);
        if (!schedule_keys.insert(key).second) {
            reject(config.schedule_file, line_no, "duplicate match key " + key);
            continue;
        }
        schedule.push_back(std::move(s));
    }
    report.schedule_rows = schedule.size();

    // Quotes: canonicalize each book row, group per match.
    CsvFile lines_csv = read_csv(config.lines_file);
    const std::size_t l_date = lines_csv.column("date");
    const std::size_t l_away = lines_csv.column("away_team");
    const std::size_t l_home = lines_csv.column("home_team");
    const std::size_t l_fav = lines_csv.column("fav_team");
    const std::size_t l_dog = lines_csv.column("dog_team");
    const std::size_t l_fav_line = lines_csv.column("fav_line");
    const std::size_t l_dog_line = lines_csv.column("dog_line");
    const std::size_t l_book = lines_csv.column("book_id");
    // Optional: an explicit is_pickem flag for sources that do not quote the
    // (110, -110) sentinel. Flagged rows may leave the line fields empty.
    std::size_t l_pickem = lines_csv.header.size();
    for (std::size_t i = 0; i < lines_csv.header.size(); ++i)
        if (lines_csv.header[i] == "is_pickem") l_pickem = i;

    std::map<std::string, std::vector<MoneyLine>> quotes;
    for (std::size_t r = 0; r < lines_csv.rows.size(); ++r) {
        const auto& row = lines_csv.rows[r];
        const std::size_t line_no = lines_csv.line_numbers[r];
        auto date = Date::parse(row[l_date]);
        if (!date) {
            reject(config.lines_file, line_no, "bad date '" + row[l_date] + "'");
            continue;
        }
        const std::string away = canonical_team(row[l_away], config);
        const std::string home = canonical_team(row[l_home], config);
        RawQuote quote;
        quote.book_id = row[l_book];
        quote.fav_team = canonical_team(row[l_fav], config);
        quote.dog_team = canonical_team(row[l_dog], config);
        if ((quote.fav_team != home && quote.fav_team != away) ||
            (quote.dog_team != home && quote.dog_team != away)) {
            reject(config.lines_file, line_no, "favorite/underdog are not the listed teams");
            continue;
        }
        bool flagged_pickem = false;
        if (l_pickem < lines_csv.header.size() && !row[l_pickem].empty()) {
            const std::string& flag = row[l_pickem];
            if (flag == "1" || flag == "true" || flag == "yes")
                flagged_pickem = true;
            else if (flag != "0" && flag != "false" && flag != "no") {
                reject(config.lines_file, line_no, "bad is_pickem value '" + flag + "'");
                continue;
            }
        }
        if (flagged_pickem) {
            // The flag stands in for the sentinel; contradictory lines are a
            // data error.
            const bool lines_empty = row[l_fav_line].empty() && row[l_dog_line].empty();
            const bool lines_sentinel =
                row[l_fav_line] == "110" && row[l_dog_line] == "-110";
            if (!lines_empty && !lines_sentinel) {
                reject(config.lines_file, line_no, "is_pickem contradicts the quoted lines");
                continue;
            }
            quote.fav_line = kPickemFavLine;
            quote.dog_line = kPickemDogLine;
        } else if (!parse_int(row[l_fav_line], quote.fav_line) ||
                   !parse_int(row[l_dog_line], quote.dog_line)) {
            reject(config.lines_file, line_no, "bad line values");
            continue;
        }
        try {
            quotes[make_match_id(*date, away, home)].push_back(canonicalize(quote));
        } catch (const std::exception& e) {
            reject(config.lines_file, line_no, e.what());
        }
    }

    // Game log rows, validated and cross-paired.
    CsvFile log_csv = read_csv(config.game_log_file);
    const std::size_t g_date = log_csv.column("date");
    const std::size_t g_team = log_csv.column("team");
    const std::size_t g_opp = log_csv.column("opponent");
    const std::size_t g_venue = log_csv.column("venue");
    const std::size_t g_pf = log_csv.column("points_for");
    const std::size_t g_pa = log_csv.column("points_against");
    std::vector<std::size_t> stat_columns;
    for (const std::string& stat : config.schema.stats) stat_columns.push_back(log_csv.column(stat));

    // Schedule result lookup for the consistency check below.
    std::map<std::string, std::string> winner_by_id;
    for (const ScheduleRow& s : schedule)
        winner_by_id[make_match_id(s.date, s.away, s.home)] = s.winner;

    std::vector<GameLogRow> log_rows;
    std::vector<std::size_t> log_lines;
    for (std::size_t r = 0; r < log_csv.rows.size(); ++r) {
        const auto& row = log_csv.rows[r];
        const std::size_t line_no = log_csv.line_numbers[r];
        auto date = Date::parse(row[g_date]);
        if (!date) {
            reject(config.game_log_file, line_no, "bad date '" + row[g_date] + "'");
            continue;
        }
        GameLogRow g;
        g.date = *date;
        g.team = canonical_team(row[g_team], config);
        g.opponent = canonical_team(row[g_opp], config);
        if (row[g_venue] == "home")
            g.venue = Venue::home;
        else if (row[g_venue] == "away")
            g.venue = Venue::away;
        else if (row[g_venue] == "neutral")
            g.venue = Venue::neutral;
        else {
            reject(config.game_log_file, line_no, "bad venue '" + row[g_venue] + "'");
            continue;
        }
        bool ok = parse_double(row[g_pf], g.points_for) && parse_double(row[g_pa], g.points_against);
        for (std::size_t c = 0; ok && c < stat_columns.size(); ++c) {
            double value = 0.0;
            ok = parse_double(row[stat_columns[c]], value) && value >= 0.0;
            if (ok) g.stats[config.schema.stats[c]] = value;
        }
        if (!ok || g.points_for < 0 || g.points_against < 0) {
            reject(config.game_log_file, line_no, "bad numeric stat values");
            continue;
        }
        if (g.points_for == g.points_against) {
            reject(config.game_log_file, line_no, "tied score is not supported");
            continue;
        }
        // When the game is on the schedule the box score must agree with it.
        std::string match_id;
        if (g.venue == Venue::home)
            match_id = make_match_id(g.date, g.opponent, g.team);
        else if (g.venue == Venue::away)
            match_id = make_match_id(g.date, g.team, g.opponent);
        else if (winner_by_id.count(make_match_id(g.date, g.team, g.opponent)))
            match_id = make_match_id(g.date, g.team, g.opponent);
        else
            match_id = make_match_id(g.date, g.opponent, g.team);
        auto sched = winner_by_id.find(match_id);
        if (sched != winner_by_id.end()) {
            const std::string& log_winner = g.points_for > g.points_against ? g.team : g.opponent;
            if (log_winner != sched->second) {
                reject(config.game_log_file, line_no, "score contradicts the schedule result");
                continue;
            }
        }
        log_rows.push_back(std::move(g));
        log_lines.push_back(line_no);
    }

    // Drop rows that cannot be paired with the opposing side.
    auto problems = GameLog::validate_rows(log_rows);
    if (!problems.empty()) {
        std::set<std::size_t> drop;
        for (const auto& [index, reason] : problems) {
            reject(config.game_log_file, log_lines[index], reason);
            drop.insert(index);
        }
        // A paired row whose partner is dropped becomes unpaired; iterate
        // until stable.
        for (;;) {
            std::vector<GameLogRow> kept;
            std::vector<std::size_t> kept_lines;
            for (std::size_t i = 0; i < log_rows.size(); ++i) {
                if (drop.count(i)) continue;
                kept.push_back(log_rows[i]);
                kept_lines.push_back(log_lines[i]);
            }
            auto remaining = GameLog::validate_rows(kept);
            if (remaining.empty()) {
                log_rows = std::move(kept);
                log_lines = std::move(kept_lines);
                break;
            }
            std::set<std::size_t> next_drop;
            std::size_t kept_index = 0;
            for (std::size_t i = 0; i < log_rows.size(); ++i) {
                if (drop.count(i)) continue;
                for (const auto& [index, reason] : remaining) {
                    if (index == kept_index) {
                        reject(config.game_log_file, log_lines[i], reason);
                        next_drop.insert(i);
                    }
                }
                ++kept_index;
            }
            for (std::size_t i : next_drop) drop.insert(i);
        }
    }

    IngestResult result;
    result.report = report;
    result.game_log = GameLog(std::move(log_rows));

    // Join schedule rows to merged quotes, then apply the skip window.
    Date season_start{9999, 12, 31};
    for (const ScheduleRow& s : schedule) season_start = std::min(season_start, s.date);

    std::set<std::string> played;
    for (const ScheduleRow& s : schedule) {
        const std::string id = make_match_id(s.date, s.away, s.home);
        played.insert(id);
        auto it = quotes.find(id);
        if (it == quotes.end()) {
            ++result.report.unquoted;
            continue;
        }
        MoneyLine merged;
        try {
            merged = conservative_merge(it->second);
        } catch (const std::exception& e) {
            result.report.rejected.push_back({config.lines_file, 0, id + ": " + e.what()});
            ++result.report.unquoted;
            continue;
        }
        ++result.report.matched;
        if (s.date.day_number() < season_start.day_number() + config.skip_days) {
            ++result.report.skipped;
            continue;
        }
        MatchRecord match;
        match.match_id = id;
        match.date = s.date;
        match.home_team = s.home;
        match.away_team = s.away;
        match.winner = s.winner;
        match.home_score = s.home_score;
        match.away_score = s.away_score;
        match.venue = s.venue;
        match.line = std::move(merged);
        result.matches.push_back(std::move(match));
    }
    for (const auto& [id, match_quotes] : quotes) {
        (void)match_quotes;
        if (!played.count(id)) ++result.report.unplayed_quotes;
    }
    return result;
}

std::string describe_join(const JoinReport& report) {
    std::ostringstream out;
    out << "schedule rows: " << report.schedule_rows << "\n";
    out << "matched to quotes: " << report.matched << "\n";
    out << "unquoted (excluded): " << report.unquoted << "\n";
    out << "unplayed quotes: " << report.unplayed_quotes << "\n";
    out << "skipped by skip rule: " << report.skipped << "\n";
    out << "rejected rows: " << report.rejected.size() << "\n";
    for (const RejectedRow& row : report.rejected)
        out << "  " << row.file << ":" << row.line_no << ": " << row.reason << "\n";
    return out.str();
}

}  // namespace betsim
