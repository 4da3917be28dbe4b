#include "betsim/features.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <set>
#include <stdexcept>
#include <tuple>

namespace betsim {

const char* to_string(RepresentationKind kind) {
    switch (kind) {
        case RepresentationKind::basic_avg: return "basic_avg";
        case RepresentationKind::opp_avg: return "opp_avg";
        case RepresentationKind::adj_avg: return "adj_avg";
        case RepresentationKind::srs: return "srs";
        case RepresentationKind::adj_eff: return "adj_eff";
    }
    return "unknown";
}

SportSchema SportSchema::basketball() {
    SportSchema s;
    s.id = "basketball";
    s.stats = {"fga", "fgm", "fg3a", "fg3m", "fta", "ftm", "oreb", "dreb",
               "ast",  "to",  "stl",  "blk"};
    s.possession_formula = {{"fga", 1.0}, {"oreb", -1.0}, {"to", 1.0}, {"fta", 0.475}};
    s.normalize_target = 65.0;
    s.adjust_stats = {"points_for"};
    return s;
}

SportSchema SportSchema::football() {
    SportSchema s;
    s.id = "football";
    s.stats = {"total_yards", "pass_yards",   "rush_yards", "first_downs",
               "turnovers",   "penalty_yards", "drives"};
    s.possession_formula = {{"drives", 1.0}};
    s.normalize_target = 65.0;
    s.adjust_stats = {"points_for", "total_yards"};
    return s;
}

void SportSchema::validate() const {
    std::set<std::string> known(stats.begin(), stats.end());
    known.insert("points_for");
    known.insert("points_against");
    for (const auto& [stat, coeff] : possession_formula) {
        (void)coeff;
        if (!known.count(stat))
            throw std::invalid_argument("schema " + id + ": possession formula references unknown stat '" +
                                        stat + "'");
    }
    for (const std::string& stat : adjust_stats)
        if (!known.count(stat))
            throw std::invalid_argument("schema " + id + ": adjust stat '" + stat + "' is unknown");
    for (const std::string& stat : scale_exempt)
        if (!known.count(stat))
            throw std::invalid_argument("schema " + id + ": scale-exempt stat '" + stat + "' is unknown");
    if (normalize_target <= 0)
        throw std::invalid_argument("schema " + id + ": normalization target must be positive");
}

double RecencyWeights::weight(std::size_t i, std::size_t n) const {
    if (scheme == Scheme::exponential)
        return std::pow(parameter, static_cast<double>(n - 1 - i));
    return 1.0 + parameter * static_cast<double>(i);
}

void RecencyWeights::validate() const {
    if (scheme == Scheme::exponential) {
        if (!(parameter > 0.0) || parameter > 1.0)
            throw std::invalid_argument("recency weights: exponential decay must be in (0,1]");
    } else if (parameter < 0.0) {
        throw std::invalid_argument("recency weights: linear step must be non-negative");
    }
}

namespace {

using PairKey = std::tuple<long, std::string, std::string>;

PairKey key_of(const GameLogRow& row) {
    return {row.date.day_number(), row.team, row.opponent};
}

PairKey mirror_key_of(const GameLogRow& row) {
    return {row.date.day_number(), row.opponent, row.team};
}

bool venues_mirror(Venue a, Venue b) {
    if (a == Venue::neutral) return b == Venue::neutral;
    return (a == Venue::home && b == Venue::away) || (a == Venue::away && b == Venue::home);
}

}  // namespace

std::vector<std::pair<std::size_t, std::string>> GameLog::validate_rows(
    const std::vector<GameLogRow>& rows) {
    std::vector<std::pair<std::size_t, std::string>> problems;
    std::map<PairKey, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].team == rows[i].opponent || rows[i].team.empty() || rows[i].opponent.empty()) {
            problems.emplace_back(i, "team and opponent must be two distinct names");
            continue;
        }
        groups[key_of(rows[i])].push_back(i);
    }
    for (const auto& [key, indices] : groups) {
        auto mirror = groups.find({std::get<0>(key), std::get<2>(key), std::get<1>(key)});
        const std::size_t mirrored = mirror == groups.end() ? 0 : mirror->second.size();
        for (std::size_t k = 0; k < indices.size(); ++k) {
            const std::size_t i = indices[k];
            if (k >= mirrored) {
                problems.emplace_back(i, "no opposing row for this game");
                continue;
            }
            const GameLogRow& a = rows[i];
            const GameLogRow& b = rows[mirror->second[k]];
            if (!venues_mirror(a.venue, b.venue))
                problems.emplace_back(i, "venue disagrees with the opposing row");
            else if (a.points_for != b.points_against || a.points_against != b.points_for)
                problems.emplace_back(i, "score disagrees with the opposing row");
        }
    }
    std::sort(problems.begin(), problems.end());
    return problems;
}

GameLog::GameLog(std::vector<GameLogRow> rows) : rows_(std::move(rows)) {
    auto problems = validate_rows(rows_);
    if (!problems.empty())
        throw std::invalid_argument("game log row " + std::to_string(problems.front().first) +
                                    ": " + problems.front().second);
    paired_.assign(rows_.size(), 0);
    std::map<PairKey, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < rows_.size(); ++i) groups[key_of(rows_[i])].push_back(i);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const auto& mirror = groups.at(mirror_key_of(rows_[i]));
        const auto& own = groups.at(key_of(rows_[i]));
        std::size_t k = static_cast<std::size_t>(
            std::find(own.begin(), own.end(), i) - own.begin());
        paired_[i] = mirror[k];
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) by_team_[rows_[i].team].push_back(i);
    for (auto& [team, indices] : by_team_) {
        (void)team;
        std::stable_sort(indices.begin(), indices.end(),
                         [&](std::size_t a, std::size_t b) { return rows_[a].date < rows_[b].date; });
    }
}

const GameLogRow& GameLog::opposing(std::size_t row_index) const {
    return rows_.at(paired_.at(row_index));
}

std::vector<std::size_t> GameLog::team_rows_before(const std::string& team,
                                                   const Date& as_of) const {
    std::vector<std::size_t> out;
    auto it = by_team_.find(team);
    if (it == by_team_.end()) return out;
    for (std::size_t idx : it->second) {
        if (!(rows_[idx].date < as_of)) break;
        out.push_back(idx);
    }
    return out;
}

std::vector<std::string> GameLog::teams_before(const Date& as_of) const {
    std::vector<std::string> out;
    for (const auto& [team, indices] : by_team_)
        if (!indices.empty() && rows_[indices.front()].date < as_of) out.push_back(team);
    return out;
}

double estimate_possessions(const GameLogRow& row, const SportSchema& schema) {
    double possessions = 0.0;
    for (const auto& [stat, coeff] : schema.possession_formula) {
        double value = 0.0;
        if (stat == "points_for") {
            value = row.points_for;
        } else if (stat == "points_against") {
            value = row.points_against;
        } else {
            auto it = row.stats.find(stat);
            if (it == row.stats.end())
                throw std::invalid_argument("row for " + row.team + " on " + row.date.to_string() +
                                            " lacks stat '" + stat + "'");
            value = it->second;
        }
        possessions += coeff * value;
    }
    if (!(possessions > 0.0))
        throw std::invalid_argument("row for " + row.team + " on " + row.date.to_string() +
                                    ": possession estimate is not positive");
    return possessions;
}

StatVector normalize_per_possessions(const GameLogRow& row, const SportSchema& schema,
                                     double target) {
    if (!(target > 0.0)) throw std::invalid_argument("normalization target must be positive");
    const double factor = target / estimate_possessions(row, schema);
    StatVector out;
    for (const std::string& stat : schema.stats) {
        auto it = row.stats.find(stat);
        if (it == row.stats.end())
            throw std::invalid_argument("row for " + row.team + " on " + row.date.to_string() +
                                        " lacks stat '" + stat + "'");
        bool exempt = std::find(schema.scale_exempt.begin(), schema.scale_exempt.end(), stat) !=
                      schema.scale_exempt.end();
        out[stat] = exempt ? it->second : it->second * factor;
    }
    out["points_for"] = row.points_for * factor;
    out["points_against"] = row.points_against * factor;
    return out;
}

StatVector weighted_average(const std::vector<StatVector>& rows_oldest_first,
                            const RecencyWeights& weights) {
    if (rows_oldest_first.empty())
        throw std::invalid_argument("weighted_average: no rows");
    weights.validate();
    const std::size_t n = rows_oldest_first.size();
    StatVector sums;
    for (const auto& [stat, value] : rows_oldest_first.front()) {
        (void)value;
        sums[stat] = 0.0;
    }
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights.weight(i, n);
        weight_sum += w;
        if (rows_oldest_first[i].size() != sums.size())
            throw std::invalid_argument("weighted_average: rows disagree on stat names");
        for (const auto& [stat, value] : rows_oldest_first[i]) {
            auto it = sums.find(stat);
            if (it == sums.end())
                throw std::invalid_argument("weighted_average: rows disagree on stat names");
            it->second += w * value;
        }
    }
    for (auto& [stat, value] : sums) {
        (void)stat;
        value /= weight_sum;
    }
    return sums;
}

namespace {

StatVector prefixed(const StatVector& vec, const std::string& prefix) {
    StatVector out;
    for (const auto& [stat, value] : vec) out[prefix + stat] = value;
    return out;
}

StatVector merged(const StatVector& a, const StatVector& b) {
    StatVector out = a;
    out.insert(b.begin(), b.end());
    return out;
}

}  // namespace

StatVector basic_average(const GameLog& log, const std::string& team, const Date& as_of,
                         const SportSchema& schema, const RecencyWeights& weights) {
    auto indices = log.team_rows_before(team, as_of);
    if (indices.empty())
        throw std::invalid_argument("basic_average: " + team + " has no games before " +
                                    as_of.to_string());
    std::vector<StatVector> games;
    games.reserve(indices.size());
    for (std::size_t idx : indices) {
        const GameLogRow& own = log.rows()[idx];
        const GameLogRow& opp = log.opposing(idx);
        games.push_back(
            merged(prefixed(normalize_per_possessions(own, schema, schema.normalize_target), "off_"),
                   prefixed(normalize_per_possessions(opp, schema, schema.normalize_target), "def_")));
    }
    return weighted_average(games, weights);
}

BasicTimeline BasicTimeline::build(const GameLog& log, const SportSchema& schema,
                                   const RecencyWeights& weights) {
    const Date far_future{9999, 12, 31};
    BasicTimeline timeline;
    for (const std::string& team : log.teams_before(far_future)) {
        auto& entries = timeline.by_team_[team];
        for (std::size_t idx : log.team_rows_before(team, far_future)) {
            const Date& date = log.rows()[idx].date;
            if (!entries.empty() && entries.back().first == date) continue;
            if (entries.empty()) {
                entries.emplace_back(date, StatVector{});  // debut: nothing earlier
            } else {
                entries.emplace_back(date, basic_average(log, team, date, schema, weights));
            }
        }
    }
    return timeline;
}

const StatVector* BasicTimeline::before(const std::string& team, const Date& date) const {
    auto it = by_team_.find(team);
    if (it == by_team_.end()) return nullptr;
    const StatVector* found = nullptr;
    for (const auto& [entry_date, vec] : it->second) {
        if (entry_date == date) {
            found = vec.empty() ? nullptr : &vec;
            break;
        }
        if (date < entry_date) break;
    }
    return found;
}

namespace {

StatVector opponents_average_impl(const GameLog& log, const std::string& team, const Date& as_of,
                                  const SportSchema&, const RecencyWeights& weights,
                                  const BasicTimeline& timeline) {
    auto indices = log.team_rows_before(team, as_of);
    if (indices.empty())
        throw std::invalid_argument("opponents_average: " + team + " has no games before " +
                                    as_of.to_string());
    std::vector<StatVector> usable;
    for (std::size_t idx : indices) {
        const GameLogRow& row = log.rows()[idx];
        if (const StatVector* rep = timeline.before(row.opponent, row.date)) usable.push_back(*rep);
    }
    if (usable.empty()) return {};
    return weighted_average(usable, weights);
}

}  // namespace

StatVector opponents_average(const GameLog& log, const std::string& team, const Date& as_of,
                             const SportSchema& schema, const RecencyWeights& weights,
                             const BasicTimeline* timeline) {
    BasicTimeline local;
    if (!timeline) {
        local = BasicTimeline::build(log, schema, weights);
        timeline = &local;
    }
    StatVector out = opponents_average_impl(log, team, as_of, schema, weights, *timeline);
    if (out.empty())
        throw std::invalid_argument("opponents_average: no faced opponent of " + team +
                                    " had prior games before " + as_of.to_string());
    return out;
}

namespace {

// One side of one game inside the opponent-adjustment fixed point.
struct AdjustGame {
    double weight = 0.0;
    double off_value = 0.0;  // what the team produced, per-possession
    double def_value = 0.0;  // what it allowed (the opposing row's production)
    std::size_t opponent = 0;
};

struct AdjustProblem {
    std::vector<std::string> teams;                  // sorted
    std::vector<std::vector<AdjustGame>> games;      // per team
    std::vector<double> weight_sum;                  // per team
};

// Damped Jacobi sweeps on adj_off/adj_def with a league-mean rescale per
// sweep. Damping keeps two-team style schedules from oscillating; the
// rescale pins the league weighted mean of the adjusted values to the raw
// league mean, so the adjustment redistributes rather than inflates.
void adjust_fixed_point(const AdjustProblem& problem, const FixedPointConfig& config,
                        const std::string& what, std::vector<double>& adj_off,
                        std::vector<double>& adj_def, FixedPointDiag& diag) {
    const std::size_t n = problem.teams.size();
    double total_weight = 0.0;
    double league_off = 0.0;
    double league_def = 0.0;
    adj_off.assign(n, 0.0);
    adj_def.assign(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        for (const AdjustGame& g : problem.games[t]) {
            league_off += g.weight * g.off_value;
            league_def += g.weight * g.def_value;
            adj_off[t] += g.weight * g.off_value;
            adj_def[t] += g.weight * g.def_value;
        }
        total_weight += problem.weight_sum[t];
        adj_off[t] /= problem.weight_sum[t];
        adj_def[t] /= problem.weight_sum[t];
    }
    league_off /= total_weight;
    league_def /= total_weight;
    if (!(league_off > 0.0) || !(league_def > 0.0))
        throw std::invalid_argument("adjustment of " + what + ": zero league average");

    std::vector<double> next_off(n), next_def(n);
    diag = {};
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        for (std::size_t t = 0; t < n; ++t) {
            double off = 0.0;
            double def = 0.0;
            for (const AdjustGame& g : problem.games[t]) {
                const double opp_def = adj_def[g.opponent];
                const double opp_off = adj_off[g.opponent];
                if (!(opp_def > 0.0) || !(opp_off > 0.0))
                    throw std::invalid_argument("adjustment of " + what + ": opponent value for " +
                                                problem.teams[g.opponent] + " dropped to zero");
                off += g.weight * g.off_value * league_def / opp_def;
                def += g.weight * g.def_value * league_off / opp_off;
            }
            next_off[t] = 0.5 * (adj_off[t] + off / problem.weight_sum[t]);
            next_def[t] = 0.5 * (adj_def[t] + def / problem.weight_sum[t]);
        }
        double mean_off = 0.0;
        double mean_def = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            mean_off += problem.weight_sum[t] * next_off[t];
            mean_def += problem.weight_sum[t] * next_def[t];
        }
        mean_off /= total_weight;
        mean_def /= total_weight;
        const double scale_off = league_off / mean_off;
        const double scale_def = league_def / mean_def;
        double residual = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            next_off[t] *= scale_off;
            next_def[t] *= scale_def;
            residual = std::max(residual, std::abs(next_off[t] - adj_off[t]));
            residual = std::max(residual, std::abs(next_def[t] - adj_def[t]));
        }
        adj_off = next_off;
        adj_def = next_def;
        diag.iterations = iter;
        diag.residual = residual;
        if (residual < config.tolerance) {
            diag.converged = true;
            return;
        }
    }
    diag.converged = false;
}

// Points per 100 possessions, the efficiency the adjustment runs on.
double row_efficiency(const GameLogRow& row, const SportSchema& schema, double points) {
    return points / estimate_possessions(row, schema) * 100.0;
}

AdjustProblem collect_adjust_games(const GameLog& log, const Date& as_of,
                                   const RecencyWeights& weights,
                                   const std::function<double(const GameLogRow&, const GameLogRow&)>& off_of,
                                   const std::function<double(const GameLogRow&, const GameLogRow&)>& def_of) {
    AdjustProblem problem;
    problem.teams = log.teams_before(as_of);
    std::map<std::string, std::size_t> index;
    for (std::size_t t = 0; t < problem.teams.size(); ++t) index[problem.teams[t]] = t;
    problem.games.resize(problem.teams.size());
    problem.weight_sum.assign(problem.teams.size(), 0.0);
    for (std::size_t t = 0; t < problem.teams.size(); ++t) {
        auto indices = log.team_rows_before(problem.teams[t], as_of);
        const std::size_t n = indices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const GameLogRow& own = log.rows()[indices[i]];
            const GameLogRow& opp = log.opposing(indices[i]);
            AdjustGame g;
            g.weight = weights.weight(i, n);
            g.off_value = off_of(own, opp);
            g.def_value = def_of(own, opp);
            g.opponent = index.at(own.opponent);
            problem.games[t].push_back(g);
            problem.weight_sum[t] += g.weight;
        }
    }
    return problem;
}

}  // namespace

AdjustedStats adjusted_averages(const GameLog& log, const Date& as_of, const SportSchema& schema,
                                const RecencyWeights& weights, const FixedPointConfig& config) {
    weights.validate();
    schema.validate();
    AdjustedStats result;
    auto teams = log.teams_before(as_of);
    if (teams.empty()) return result;
    for (const std::string& team : teams) result.by_team[team] = {};
    for (const std::string& stat : schema.adjust_stats) {
        auto value_of = [&](const GameLogRow& row) {
            StatVector norm = normalize_per_possessions(row, schema, schema.normalize_target);
            return norm.at(stat);
        };
        AdjustProblem problem = collect_adjust_games(
            log, as_of, weights,
            [&](const GameLogRow& own, const GameLogRow&) { return value_of(own); },
            [&](const GameLogRow&, const GameLogRow& opp) { return value_of(opp); });
        std::vector<double> adj_off, adj_def;
        FixedPointDiag diag;
        adjust_fixed_point(problem, config, stat, adj_off, adj_def, diag);
        for (std::size_t t = 0; t < problem.teams.size(); ++t) {
            result.by_team[problem.teams[t]]["adj_off_" + stat] = adj_off[t];
            result.by_team[problem.teams[t]]["adj_def_" + stat] = adj_def[t];
        }
        if (diag.iterations > result.diag.iterations) result.diag.iterations = diag.iterations;
        result.diag.residual = std::max(result.diag.residual, diag.residual);
        result.diag.converged = result.diag.converged && diag.converged;
    }
    return result;
}

AdjustedEfficiencies adjusted_efficiencies(const GameLog& log, const Date& as_of,
                                           const SportSchema& schema,
                                           const RecencyWeights& weights,
                                           const FixedPointConfig& config) {
    weights.validate();
    AdjustedEfficiencies result;
    auto teams = log.teams_before(as_of);
    if (teams.empty()) return result;
    AdjustProblem problem = collect_adjust_games(
        log, as_of, weights,
        [&](const GameLogRow& own, const GameLogRow&) {
            return row_efficiency(own, schema, own.points_for);
        },
        [&](const GameLogRow& own, const GameLogRow&) {
            return row_efficiency(own, schema, own.points_against);
        });
    std::vector<double> adj_oe, adj_de;
    adjust_fixed_point(problem, config, "efficiency", adj_oe, adj_de, result.diag);
    for (std::size_t t = 0; t < problem.teams.size(); ++t)
        result.by_team[problem.teams[t]] = {adj_oe[t], adj_de[t]};
    return result;
}

SrsResult srs_weighted(const GameLog& log, const Date& as_of, const RecencyWeights& weights,
                       const FixedPointConfig& config) {
    weights.validate();
    SrsResult result;
    auto teams = log.teams_before(as_of);
    const std::size_t n = teams.size();
    if (n == 0) return result;
    std::map<std::string, std::size_t> index;
    for (std::size_t t = 0; t < n; ++t) index[teams[t]] = t;

    std::vector<double> margin(n, 0.0);
    std::vector<std::vector<std::pair<std::size_t, double>>> opponents(n);
    for (std::size_t t = 0; t < n; ++t) {
        auto indices = log.team_rows_before(teams[t], as_of);
        const std::size_t games = indices.size();
        double weight_sum = 0.0;
        for (std::size_t i = 0; i < games; ++i) {
            const GameLogRow& row = log.rows()[indices[i]];
            const double w = weights.weight(i, games);
            weight_sum += w;
            margin[t] += w * (row.points_for - row.points_against);
            opponents[t].emplace_back(index.at(row.opponent), w);
        }
        margin[t] /= weight_sum;
        for (auto& [opp, w] : opponents[t]) {
            (void)opp;
            w /= weight_sum;
        }
    }

    // Connected components of the schedule graph; each solves and recenters
    // on its own.
    std::vector<int> component(n, -1);
    int n_components = 0;
    for (std::size_t start = 0; start < n; ++start) {
        if (component[start] >= 0) continue;
        std::vector<std::size_t> stack{start};
        component[start] = n_components;
        while (!stack.empty()) {
            std::size_t t = stack.back();
            stack.pop_back();
            for (const auto& [opp, w] : opponents[t]) {
                (void)w;
                if (component[opp] < 0) {
                    component[opp] = n_components;
                    stack.push_back(opp);
                }
            }
        }
        ++n_components;
    }

    std::vector<double> rating(n, 0.0), next(n, 0.0);
    result.diag = {};
    for (int c = 0; c < n_components; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t t = 0; t < n; ++t)
            if (component[t] == c) members.push_back(t);
        FixedPointDiag diag;
        for (int iter = 1; iter <= config.max_iterations; ++iter) {
            for (std::size_t t : members) {
                double opp_term = 0.0;
                for (const auto& [opp, w] : opponents[t]) opp_term += w * rating[opp];
                next[t] = 0.5 * (rating[t] + margin[t] + opp_term);
            }
            double mean = 0.0;
            for (std::size_t t : members) mean += next[t];
            mean /= static_cast<double>(members.size());
            double residual = 0.0;
            for (std::size_t t : members) {
                next[t] -= mean;
                residual = std::max(residual, std::abs(next[t] - rating[t]));
            }
            for (std::size_t t : members) rating[t] = next[t];
            diag.iterations = iter;
            diag.residual = residual;
            if (residual < config.tolerance) {
                diag.converged = true;
                break;
            }
            diag.converged = false;
        }
        if (diag.iterations > result.diag.iterations) result.diag.iterations = diag.iterations;
        result.diag.residual = std::max(result.diag.residual, diag.residual);
        result.diag.converged = result.diag.converged && diag.converged;
    }

    for (std::size_t t = 0; t < n; ++t)
        result.by_team[teams[t]] = {rating[t], rating[t] - margin[t]};
    return result;
}

TeamRepresentation representation(const DateSnapshot& snapshot, const std::string& team,
                                  RepresentationKind kind) {
    auto it = snapshot.teams.find(team);
    if (it == snapshot.teams.end())
        throw std::invalid_argument("no representation for " + team + " as of " +
                                    snapshot.as_of.to_string());
    TeamRepresentation rep;
    rep.team = team;
    rep.as_of_date = snapshot.as_of;
    rep.kind = kind;
    switch (kind) {
        case RepresentationKind::basic_avg: rep.features = it->second.basic; break;
        case RepresentationKind::opp_avg: rep.features = it->second.opponents; break;
        case RepresentationKind::adj_avg: rep.features = it->second.adjusted; break;
        case RepresentationKind::adj_eff:
            rep.features = {{"adj_oe", it->second.adj_oe}, {"adj_de", it->second.adj_de}};
            break;
        case RepresentationKind::srs:
            rep.features = {{"rating", it->second.srs_rating}, {"sos", it->second.srs_sos}};
            break;
    }
    return rep;
}

namespace {

DateSnapshot build_representations_impl(const GameLog& log, const SportSchema& schema,
                                        const RecencyWeights& weights,
                                        const FixedPointConfig& config, const Date& as_of,
                                        const BasicTimeline& timeline) {
    DateSnapshot snapshot;
    snapshot.as_of = as_of;
    auto teams = log.teams_before(as_of);
    if (teams.empty()) return snapshot;

    AdjustedStats adjusted = adjusted_averages(log, as_of, schema, weights, config);
    AdjustedEfficiencies efficiencies = adjusted_efficiencies(log, as_of, schema, weights, config);
    SrsResult srs = srs_weighted(log, as_of, weights, config);
    snapshot.adjust_diag = adjusted.diag;
    snapshot.efficiency_diag = efficiencies.diag;
    snapshot.srs_diag = srs.diag;

    for (const std::string& team : teams) {
        TeamFeatures f;
        f.basic = basic_average(log, team, as_of, schema, weights);
        f.opponents = opponents_average_impl(log, team, as_of, schema, weights, timeline);
        f.adjusted = adjusted.by_team.at(team);
        const EfficiencyRating& eff = efficiencies.by_team.at(team);
        f.adj_oe = eff.adj_oe;
        f.adj_de = eff.adj_de;
        const SrsRating& rating = srs.by_team.at(team);
        f.srs_rating = rating.rating;
        f.srs_sos = rating.sos;
        f.games = log.team_rows_before(team, as_of).size();
        snapshot.teams.emplace(team, std::move(f));
    }
    return snapshot;
}

}  // namespace

DateSnapshot build_representations(const GameLog& log, const SportSchema& schema,
                                   const RecencyWeights& weights, const FixedPointConfig& config,
                                   const Date& as_of) {
    schema.validate();
    weights.validate();
    BasicTimeline timeline = BasicTimeline::build(log, schema, weights);
    return build_representations_impl(log, schema, weights, config, as_of, timeline);
}

std::vector<DateSnapshot> build_snapshots(const GameLog& log, const SportSchema& schema,
                                          const RecencyWeights& weights,
                                          const FixedPointConfig& config,
                                          const std::vector<Date>& dates, ExecMode mode) {
    schema.validate();
    weights.validate();
    BasicTimeline timeline = BasicTimeline::build(log, schema, weights);
    std::vector<DateSnapshot> out(dates.size());
    if (mode == ExecMode::parallel) {
        std::exception_ptr error = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (long i = 0; i < static_cast<long>(dates.size()); ++i) {
            try {
                out[static_cast<std::size_t>(i)] = build_representations_impl(
                    log, schema, weights, config, dates[static_cast<std::size_t>(i)], timeline);
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
    } else {
        for (std::size_t i = 0; i < dates.size(); ++i)
            out[i] = build_representations_impl(log, schema, weights, config, dates[i], timeline);
    }
    return out;
}

}  // namespace betsim
