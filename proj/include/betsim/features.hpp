#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "betsim/date.hpp"
#include "betsim/parallel.hpp"
#include "betsim/venue.hpp"

namespace betsim {

// Named per-game statistics. Ordered map so every traversal is deterministic.
using StatVector = std::map<std::string, double>;

// Declares the box-score columns for one sport: which stats exist, how to
// estimate possessions from them, the per-possession normalization target,
// and which stats get the opponent adjustment.
struct SportSchema {
    std::string id;
    std::vector<std::string> stats;
    std::map<std::string, double> possession_formula;  // stat name -> coefficient
    double normalize_target = 65.0;
    std::vector<std::string> adjust_stats;
    std::vector<std::string> scale_exempt;  // copied through, not per-possession scaled

    static SportSchema basketball();
    static SportSchema football();

    void validate() const;  // throws on inconsistencies
};

// One team-game: the team's own (offensive) box-score numbers. Defensive
// numbers come from the opposing row of the same game.
struct GameLogRow {
    Date date;
    std::string team;
    std::string opponent;
    Venue venue = Venue::neutral;
    StatVector stats;
    double points_for = 0.0;
    double points_against = 0.0;
};

// Recency weighting: newest game carries weight 1 under the exponential
// scheme and the oldest carries 1 under the linear scheme; either way newer
// games never weigh less than older ones.
struct RecencyWeights {
    enum class Scheme { linear, exponential };
    Scheme scheme = Scheme::exponential;
    double parameter = 0.95;  // exponential decay in (0,1], or linear step >= 0

    // Weight of game i of n, counted oldest-first.
    double weight(std::size_t i, std::size_t n) const;
    void validate() const;

    static RecencyWeights uniform() { return {Scheme::exponential, 1.0}; }
};

struct FixedPointConfig {
    double tolerance = 1e-9;  // max-abs change between sweeps
    // Damped sweeps can need a few thousand iterations on sparse
    // early-season schedules; still milliseconds at league scale.
    int max_iterations = 5000;
};

struct FixedPointDiag {
    int iterations = 0;
    double residual = 0.0;
    bool converged = true;
};

// Game log indexed for feature building. Every row must have its opposing
// row (same game seen from the other side) present; construction pairs them
// and throws when it cannot.
class GameLog {
public:
    GameLog() = default;
    explicit GameLog(std::vector<GameLogRow> rows);

    const std::vector<GameLogRow>& rows() const { return rows_; }
    const GameLogRow& opposing(std::size_t row_index) const;
    // Row indices of `team`, dated strictly before `as_of`, oldest first.
    std::vector<std::size_t> team_rows_before(const std::string& team, const Date& as_of) const;
    // Teams with at least one row strictly before `as_of`, sorted.
    std::vector<std::string> teams_before(const Date& as_of) const;
    bool empty() const { return rows_.empty(); }

    // Problems that would make construction throw, as (row index, reason)
    // pairs, for ingest-side row rejection.
    static std::vector<std::pair<std::size_t, std::string>> validate_rows(
        const std::vector<GameLogRow>& rows);

private:
    std::vector<GameLogRow> rows_;
    std::vector<std::size_t> paired_;
    std::map<std::string, std::vector<std::size_t>> by_team_;
};

// Linear-combination possession estimate from the schema's formula.
// Throws when the estimate is not positive.
double estimate_possessions(const GameLogRow& row, const SportSchema& schema);

// Scales countable stats (and the score) to `target` possessions.
// The result carries the schema stats plus "points_for"/"points_against".
StatVector normalize_per_possessions(const GameLogRow& row, const SportSchema& schema,
                                     double target);

// Recency-weighted mean of per-game vectors, oldest first.
StatVector weighted_average(const std::vector<StatVector>& rows_oldest_first,
                            const RecencyWeights& weights);

// Per-possession weighted averages of a team's own numbers ("off_") and of
// what its opponents produced against it ("def_"), before `as_of`.
StatVector basic_average(const GameLog& log, const std::string& team, const Date& as_of,
                         const SportSchema& schema, const RecencyWeights& weights);

// Pre-computed basic averages of every team as of each of its own game
// dates. Lets opponents_average and the snapshot builder share work.
class BasicTimeline {
public:
    static BasicTimeline build(const GameLog& log, const SportSchema& schema,
                               const RecencyWeights& weights);
    // Basic average of `team` as of `date` (strictly earlier games);
    // nullptr when the team has no earlier games.
    const StatVector* before(const std::string& team, const Date& date) const;

private:
    std::map<std::string, std::vector<std::pair<Date, StatVector>>> by_team_;
};

// Recency-weighted mean of the faced opponents' pre-match basic averages.
// Games whose opponent had no prior games contribute nothing; throws when no
// game is usable.
StatVector opponents_average(const GameLog& log, const std::string& team, const Date& as_of,
                             const SportSchema& schema, const RecencyWeights& weights,
                             const BasicTimeline* timeline = nullptr);

// Opponent-adjusted stats: each game value is scaled by (league average of
// the mirror stat) / (opponent's current adjusted mirror stat), then
// recency-averaged; damped Jacobi sweeps with a league-mean renormalization
// keep the iteration convergent and the league totals redistributed rather
// than inflated. Keys are "adj_off_<stat>" / "adj_def_<stat>".
struct AdjustedStats {
    std::map<std::string, StatVector> by_team;
    FixedPointDiag diag;
};

AdjustedStats adjusted_averages(const GameLog& log, const Date& as_of, const SportSchema& schema,
                                const RecencyWeights& weights, const FixedPointConfig& config);

// Same fixed point specialized to points per 100 possessions.
struct EfficiencyRating {
    double adj_oe = 0.0;
    double adj_de = 0.0;
};

struct AdjustedEfficiencies {
    std::map<std::string, EfficiencyRating> by_team;
    FixedPointDiag diag;
};

AdjustedEfficiencies adjusted_efficiencies(const GameLog& log, const Date& as_of,
                                           const SportSchema& schema,
                                           const RecencyWeights& weights,
                                           const FixedPointConfig& config);

// Rating = recency-weighted own margin + recency-weighted opponent rating,
// solved per connected schedule component and normalized to zero mean.
// SoS is the rating minus the weighted own margin.
struct SrsRating {
    double rating = 0.0;
    double sos = 0.0;
};

struct SrsResult {
    std::map<std::string, SrsRating> by_team;
    FixedPointDiag diag;
};

SrsResult srs_weighted(const GameLog& log, const Date& as_of, const RecencyWeights& weights,
                       const FixedPointConfig& config);

enum class RepresentationKind { basic_avg, opp_avg, adj_avg, srs, adj_eff };

const char* to_string(RepresentationKind kind);

struct TeamRepresentation {
    std::string team;
    Date as_of_date;
    RepresentationKind kind = RepresentationKind::basic_avg;
    StatVector features;
};

// Everything the predictors need about one team as of one date. Only teams
// with at least one earlier game appear in a snapshot.
struct TeamFeatures {
    StatVector basic;
    StatVector opponents;  // empty when no faced opponent had prior games
    StatVector adjusted;
    double adj_oe = 0.0;
    double adj_de = 0.0;
    double srs_rating = 0.0;
    double srs_sos = 0.0;
    std::size_t games = 0;
};

struct DateSnapshot {
    Date as_of;
    std::map<std::string, TeamFeatures> teams;
    FixedPointDiag adjust_diag;
    FixedPointDiag efficiency_diag;
    FixedPointDiag srs_diag;
};

TeamRepresentation representation(const DateSnapshot& snapshot, const std::string& team,
                                  RepresentationKind kind);

// All representations of every team as of one date, from strictly earlier
// games only.
DateSnapshot build_representations(const GameLog& log, const SportSchema& schema,
                                   const RecencyWeights& weights, const FixedPointConfig& config,
                                   const Date& as_of);

// Batch of per-date snapshots. Dates are independent slots, so the parallel
// flavor splits them across OpenMP threads; results are identical to the
// serial flavor bit for bit.
std::vector<DateSnapshot> build_snapshots(const GameLog& log, const SportSchema& schema,
                                          const RecencyWeights& weights,
                                          const FixedPointConfig& config,
                                          const std::vector<Date>& dates,
                                          ExecMode mode = ExecMode::parallel);

}  // namespace betsim
