#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "betsim/features.hpp"
#include "betsim/ledger.hpp"
#include "betsim/predictors.hpp"

namespace betsim {

// One predictor requested by the configuration.
struct PredictorSpec {
    std::string id;
    std::string type;  // "kp", "srs", "nb", or "external"
    KPParams kp;
    double srs_home_bonus = 0.0;
    bool nb_kernel = true;
    std::vector<std::string> nb_features;  // "<kind>:<stat>" selectors
    std::string picks_file;                // external only
};

// Season-level configuration, loaded from one JSON file. Every default is
// echoed into the run report so a run is auditable from its output alone.
struct SeasonConfig {
    SportSchema schema;
    RecencyWeights weights;
    FixedPointConfig fixed_point;
    std::optional<Date> phase_boundary;  // first post-season day
    int skip_days = 0;                   // exclude matches this close to the season start
    Rational stake = Rational(100);
    std::string schedule_file;
    std::string lines_file;
    std::string game_log_file;
    std::map<std::string, std::string> team_aliases;
    std::vector<PredictorSpec> predictors;
};

SeasonConfig load_config(const std::string& path);

// Effective configuration, defaults included, one setting per line.
std::string describe_config(const SeasonConfig& config);

// Canonical team name: trimmed, then alias-mapped.
std::string canonical_team(const std::string& raw, const SeasonConfig& config);

// Match key used to join schedules, quotes, and picks.
std::string make_match_id(const Date& date, const std::string& away, const std::string& home);

struct RejectedRow {
    std::string file;
    std::size_t line_no = 0;
    std::string reason;
};

// Row-level accounting of the join: matched + unquoted equals the number of
// valid schedule rows; rejected rows are collected, not fail-fast.
struct JoinReport {
    std::size_t schedule_rows = 0;
    std::size_t matched = 0;
    std::size_t unquoted = 0;
    std::size_t unplayed_quotes = 0;  // quoted matches absent from the schedule
    std::size_t skipped = 0;          // matched but inside the skip window
    std::vector<RejectedRow> rejected;
};

std::string describe_join(const JoinReport& report);

struct IngestResult {
    std::vector<MatchRecord> matches;  // playable: joined and outside the skip window
    GameLog game_log;
    JoinReport report;
};

// Parses the three data files, conservative-merges quotes per match, joins
// by (date, home, away) under canonical team names, and applies the skip
// rule. Throws only when a file cannot be read or parsed at all; per-row
// problems land in the report.
IngestResult ingest_and_join(const SeasonConfig& config);

// Minimal delimited-text reader shared by the ingestion paths: header row
// required, fields split on commas, no quoting.
struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // each padded/truncated to header size
    std::vector<std::size_t> line_numbers;

    std::size_t column(const std::string& name) const;  // throws when missing
};

CsvFile read_csv(const std::string& path);

}  // namespace betsim
