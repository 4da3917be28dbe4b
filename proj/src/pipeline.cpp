#include "betsim/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace betsim {

namespace {

struct FeatureSelector {
    std::string kind;  // basic | opp | adj | adjeff | srs
    std::string stat;
};

FeatureSelector parse_selector(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
        throw std::invalid_argument("feature selector '" + text + "' is not '<kind>:<stat>'");
    FeatureSelector s{text.substr(0, colon), text.substr(colon + 1)};
    if (s.kind != "basic" && s.kind != "opp" && s.kind != "adj" && s.kind != "adjeff" &&
        s.kind != "srs")
        throw std::invalid_argument("feature selector '" + text + "' has unknown kind '" +
                                    s.kind + "'");
    if (s.kind == "adjeff" && s.stat != "oe" && s.stat != "de")
        throw std::invalid_argument("adjeff selector must be 'oe' or 'de'");
    if (s.kind == "srs" && s.stat != "rating" && s.stat != "sos")
        throw std::invalid_argument("srs selector must be 'rating' or 'sos'");
    return s;
}

std::optional<double> selector_value(const TeamFeatures& features, const FeatureSelector& s) {
    if (s.kind == "adjeff") return s.stat == "oe" ? features.adj_oe : features.adj_de;
    if (s.kind == "srs") return s.stat == "rating" ? features.srs_rating : features.srs_sos;
    const StatVector* vec = s.kind == "basic" ? &features.basic
                            : s.kind == "opp" ? &features.opponents
                                              : &features.adjusted;
    auto it = vec->find(s.stat);
    if (it == vec->end()) return std::nullopt;
    return it->second;
}

// Home-minus-away differences over the configured selectors; nullopt when
// any input is unavailable.
std::optional<std::vector<double>> match_features(const DateSnapshot& snapshot,
                                                  const MatchRecord& match,
                                                  const std::vector<FeatureSelector>& selectors) {
    auto home = snapshot.teams.find(match.home_team);
    auto away = snapshot.teams.find(match.away_team);
    if (home == snapshot.teams.end() || away == snapshot.teams.end()) return std::nullopt;
    std::vector<double> out;
    out.reserve(selectors.size());
    for (const FeatureSelector& s : selectors) {
        auto h = selector_value(home->second, s);
        auto a = selector_value(away->second, s);
        if (!h || !a) return std::nullopt;
        out.push_back(*h - *a);
    }
    return out;
}

const TeamFeatures* team_in(const DateSnapshot& snapshot, const std::string& team) {
    auto it = snapshot.teams.find(team);
    return it == snapshot.teams.end() ? nullptr : &it->second;
}

PredictionSet predict_kp(const PredictorSpec& spec, const std::vector<MatchRecord>& matches,
                         const std::vector<DateSnapshot>& snapshots,
                         const std::map<long, std::size_t>& snapshot_of) {
    PredictionSet set;
    set.predictor_id = spec.id;
    for (const MatchRecord& match : matches) {
        const DateSnapshot& snapshot = snapshots[snapshot_of.at(match.date.day_number())];
        const TeamFeatures* home = team_in(snapshot, match.home_team);
        const TeamFeatures* away = team_in(snapshot, match.away_team);
        if (!home || !away) {
            set.skipped.push_back(match.match_id);
            continue;
        }
        try {
            Venue venue = match.venue == Venue::neutral ? Venue::neutral : Venue::home;
            Prediction p = kp_predict(match.home_team, {home->adj_oe, home->adj_de},
                                      match.away_team, {away->adj_oe, away->adj_de}, venue,
                                      spec.kp);
            p.match_id = match.match_id;
            set.picks.emplace(match.match_id, std::move(p));
        } catch (const std::exception&) {
            set.skipped.push_back(match.match_id);
        }
    }
    return set;
}

PredictionSet predict_srs(const PredictorSpec& spec, const std::vector<MatchRecord>& matches,
                          const std::vector<DateSnapshot>& snapshots,
                          const std::map<long, std::size_t>& snapshot_of) {
    PredictionSet set;
    set.predictor_id = spec.id;
    for (const MatchRecord& match : matches) {
        const DateSnapshot& snapshot = snapshots[snapshot_of.at(match.date.day_number())];
        const TeamFeatures* home = team_in(snapshot, match.home_team);
        const TeamFeatures* away = team_in(snapshot, match.away_team);
        if (!home || !away) {
            set.skipped.push_back(match.match_id);
            continue;
        }
        Venue venue = match.venue == Venue::neutral ? Venue::neutral : Venue::home;
        Prediction p = srs_predict(match.home_team, home->srs_rating, match.away_team,
                                   away->srs_rating, venue, spec.srs_home_bonus);
        p.match_id = match.match_id;
        set.picks.emplace(match.match_id, std::move(p));
    }
    return set;
}

PredictionSet predict_nb(const PredictorSpec& spec, const std::vector<MatchRecord>& matches,
                         const std::vector<DateSnapshot>& snapshots,
                         const std::map<long, std::size_t>& snapshot_of, ExecMode mode) {
    PredictionSet set;
    set.predictor_id = spec.id;
    std::vector<FeatureSelector> selectors;
    for (const std::string& text : spec.nb_features) selectors.push_back(parse_selector(text));

    // Matches ordered by day; each day is predicted from the completed
    // matches of strictly earlier days.
    std::vector<std::size_t> order(matches.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return matches[a].date < matches[b].date;
    });

    std::vector<std::optional<std::vector<double>>> features(matches.size());
    for (std::size_t i = 0; i < matches.size(); ++i)
        features[i] =
            match_features(snapshots[snapshot_of.at(matches[i].date.day_number())], matches[i],
                           selectors);

    std::vector<LabeledRow> training;
    std::set<std::string> classes;
    std::size_t cursor = 0;
    while (cursor < order.size()) {
        const Date day = matches[order[cursor]].date;
        std::size_t day_end = cursor;
        while (day_end < order.size() && matches[order[day_end]].date == day) ++day_end;

        if (classes.size() >= 2) {
            NBModel model = nb_train(training, spec.nb_kernel);
            std::vector<std::size_t> todo;
            std::vector<std::vector<double>> rows;
            for (std::size_t k = cursor; k < day_end; ++k) {
                const std::size_t i = order[k];
                if (features[i]) {
                    todo.push_back(i);
                    rows.push_back(*features[i]);
                } else {
                    set.skipped.push_back(matches[i].match_id);
                }
            }
            std::vector<NBPosterior> posteriors = nb_predict_batch(model, rows, mode);
            for (std::size_t k = 0; k < todo.size(); ++k) {
                const MatchRecord& match = matches[todo[k]];
                Prediction p;
                p.match_id = match.match_id;
                p.pick = posteriors[k].label == "home" ? match.home_team : match.away_team;
                p.win_probability = posteriors[k].probability;
                set.picks.emplace(match.match_id, std::move(p));
            }
        } else {
            for (std::size_t k = cursor; k < day_end; ++k)
                set.skipped.push_back(matches[order[k]].match_id);
        }

        for (std::size_t k = cursor; k < day_end; ++k) {
            const std::size_t i = order[k];
            if (!features[i]) continue;
            const std::string label =
                matches[i].winner == matches[i].home_team ? "home" : "away";
            training.push_back({label, *features[i]});
            classes.insert(label);
        }
        cursor = day_end;
    }
    std::sort(set.skipped.begin(), set.skipped.end());
    return set;
}

PredictionSet predict_external(const PredictorSpec& spec,
                               const std::vector<MatchRecord>& matches) {
    PredictionSet set;
    set.predictor_id = spec.id;
    std::ifstream in(spec.picks_file);
    if (!in) throw std::runtime_error("cannot open picks file " + spec.picks_file);
    set.picks = load_external_picks(in, matches);
    for (const MatchRecord& match : matches)
        if (!set.picks.count(match.match_id)) set.skipped.push_back(match.match_id);
    return set;
}

}  // namespace

std::vector<PredictionSet> make_predictions(const SeasonConfig& config,
                                            const std::vector<MatchRecord>& matches,
                                            const GameLog& log, ExecMode mode,
                                            std::vector<std::string>* warnings) {
    std::map<long, Date> unique_days;
    for (const MatchRecord& match : matches) unique_days.emplace(match.date.day_number(), match.date);
    std::vector<Date> dates;
    std::map<long, std::size_t> snapshot_of;
    dates.reserve(unique_days.size());
    for (const auto& [day, date] : unique_days) {
        snapshot_of[day] = dates.size();
        dates.push_back(date);
    }

    bool needs_snapshots = false;
    for (const PredictorSpec& spec : config.predictors)
        if (spec.type != "external") needs_snapshots = true;

    std::vector<DateSnapshot> snapshots;
    if (needs_snapshots) {
        snapshots = build_snapshots(log, config.schema, config.weights, config.fixed_point, dates,
                                    mode);
        if (warnings) {
            auto note = [&](const FixedPointDiag& diag, const char* what, const Date& date) {
                if (diag.converged) return;
                std::ostringstream message;
                message << what << " did not converge as of " << date.to_string() << " (residual "
                        << diag.residual << " after " << diag.iterations << " iterations)";
                warnings->push_back(message.str());
            };
            for (const DateSnapshot& snapshot : snapshots) {
                note(snapshot.adjust_diag, "stat adjustment", snapshot.as_of);
                note(snapshot.efficiency_diag, "efficiency adjustment", snapshot.as_of);
                note(snapshot.srs_diag, "SRS solve", snapshot.as_of);
            }
        }
    }

    std::vector<PredictionSet> out;
    for (const PredictorSpec& spec : config.predictors) {
        if (spec.type == "kp")
            out.push_back(predict_kp(spec, matches, snapshots, snapshot_of));
        else if (spec.type == "srs")
            out.push_back(predict_srs(spec, matches, snapshots, snapshot_of));
        else if (spec.type == "nb")
            out.push_back(predict_nb(spec, matches, snapshots, snapshot_of, mode));
        else if (spec.type == "external")
            out.push_back(predict_external(spec, matches));
        else
            throw std::invalid_argument("unknown predictor type '" + spec.type + "'");
    }
    return out;
}

namespace {

CategorizationCounts categorize_phase(const std::vector<LedgerEntry>& entries,
                                      const std::vector<MatchRecord>& matches,
                                      const SeasonSplit& split, Phase phase) {
    if (phase == Phase::combined) return categorize(entries, matches);
    std::vector<LedgerEntry> phase_entries;
    std::vector<MatchRecord> phase_matches;
    for (const LedgerEntry& entry : entries)
        if (split.phase_of(entry.date) == phase) phase_entries.push_back(entry);
    for (const MatchRecord& match : matches)
        if (split.phase_of(match.date) == phase) phase_matches.push_back(match);
    return categorize(phase_entries, phase_matches);
}

void write_text(const std::string& path, const std::string& content,
                std::vector<std::string>& written, std::vector<std::string>& errors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        errors.push_back("cannot write " + path);
        return;
    }
    out << content;
    written.push_back(path);
}

}  // namespace

PipelineResult run_pipeline(const SeasonConfig& config, const PipelineOptions& options) {
    PipelineResult result;

    SeasonConfig effective = config;
    if (!options.predictor_filter.empty()) {
        effective.predictors.clear();
        for (const std::string& id : options.predictor_filter) {
            bool found = false;
            for (const PredictorSpec& spec : config.predictors)
                if (spec.id == id) {
                    effective.predictors.push_back(spec);
                    found = true;
                }
            if (!found) result.errors.push_back("unknown predictor '" + id + "'");
        }
    }
    if (!options.run_predictors) effective.predictors.clear();

    IngestResult ingest;
    try {
        ingest = ingest_and_join(effective);
    } catch (const std::exception& e) {
        result.errors.push_back(e.what());
        result.exit_code = 1;
        return result;
    }
    result.join = ingest.report;
    if (ingest.matches.empty()) {
        result.errors.push_back("no playable matches after ingest");
        result.exit_code = 1;
        return result;
    }

    SeasonSplit split{effective.phase_boundary};

    if (options.run_baseline) result.baseline = vegas_baseline(ingest.matches, effective.stake);

    std::vector<PredictionSet> predictions;
    if (!effective.predictors.empty()) {
        try {
            predictions = make_predictions(effective, ingest.matches, ingest.game_log,
                                           options.mode, &result.errors);
        } catch (const std::exception& e) {
            result.errors.push_back(e.what());
            result.exit_code = 1;
            return result;
        }
    }

    for (const PredictionSet& prediction : predictions) {
        std::vector<MatchRecord> covered;
        std::map<std::string, std::string> picks;
        for (const MatchRecord& match : ingest.matches) {
            auto it = prediction.picks.find(match.match_id);
            if (it == prediction.picks.end()) continue;
            covered.push_back(match);
            picks[match.match_id] = it->second.pick;
        }
        PredictorReport report;
        report.id = prediction.predictor_id;
        report.skipped_matches = prediction.skipped.size();
        if (covered.empty()) {
            result.errors.push_back("predictor " + prediction.predictor_id +
                                    " produced no usable picks");
            result.predictors.push_back(std::move(report));
            continue;
        }
        BacktestResult backtest = run_backtest(covered, picks, effective.stake);
        report.entries = std::move(backtest.entries);
        report.curve = std::move(backtest.curve);
        report.categories = categorize(report.entries, covered);
        if (split.boundary) {
            report.categories_regular =
                categorize_phase(report.entries, covered, split, Phase::regular);
            report.categories_post = categorize_phase(report.entries, covered, split, Phase::post);
        }
        report.summary = summarize(report.entries, split);
        result.predictors.push_back(std::move(report));
    }

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) {
        result.errors.push_back("cannot create output directory " + options.out_dir);
        result.exit_code = 1;
        return result;
    }
    try {
        result.files_written = emit_reports(options.out_dir, result.predictors, result.baseline,
                                            split, options.emit);
    } catch (const std::exception& e) {
        result.errors.push_back(e.what());
    }
    write_text((fs::path(options.out_dir) / "run_config.txt").string(),
               describe_config(effective), result.files_written, result.errors);
    write_text((fs::path(options.out_dir) / "join_report.txt").string(),
               describe_join(result.join), result.files_written, result.errors);
    std::sort(result.files_written.begin(), result.files_written.end());

    if (!result.errors.empty()) result.exit_code = 1;
    return result;
}

}  // namespace betsim
