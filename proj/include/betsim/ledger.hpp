#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "betsim/date.hpp"
#include "betsim/odds.hpp"
#include "betsim/venue.hpp"

namespace betsim {

// One playable match: schedule facts joined with its merged money line.
// The venue is the home team's perspective: `home` for a true home floor,
// `neutral` for tournament sites.
struct MatchRecord {
    std::string match_id;
    Date date;
    std::string home_team;
    std::string away_team;
    std::string winner;
    std::optional<int> home_score;
    std::optional<int> away_score;
    Venue venue = Venue::home;
    MoneyLine line;
};

// Throws if the winner is not a participant or contradicts the scores.
void validate_match(const MatchRecord& match);

struct LedgerEntry {
    std::string match_id;
    Date date;
    std::string pick;
    BetOutcome outcome;
    Rational cumulative;  // day-end value; entries of one day share it
};

struct CurvePoint {
    Date date;
    Rational cumulative;
};

// Daily cumulative winnings, starting implicitly at 0 before the first
// betting day. Consecutive points differ by exactly that day's settle deltas.
using WinningsCurve = std::vector<CurvePoint>;

struct BacktestResult {
    std::vector<LedgerEntry> entries;
    WinningsCurve curve;
    Rational total;
};

// Fixed-stake backtest: one bet of `stake` dollars per match, tallied per
// day. Matches are processed in date order; within a day, in input order.
// Every match must have a pick naming one of its participants.
BacktestResult run_backtest(const std::vector<MatchRecord>& matches,
                            const std::map<std::string, std::string>& picks,
                            const Rational& stake = Rational(100));

// Always-bet-the-favorite accounting with Pick 'ems treated as coin flips:
// best case all flips land, worst case none do, expected is the midpoint.
struct BaselineReport {
    std::size_t n_matches = 0;
    std::size_t n_pickems = 0;
    std::optional<Rational> acc_without_pickems;  // absent when every match is a Pick 'em
    Rational payout_without_pickems;
    Rational best_acc;
    Rational best_payout;
    Rational expected_acc;
    Rational expected_payout;
    Rational worst_acc;
    Rational worst_payout;
};

BaselineReport vegas_baseline(const std::vector<MatchRecord>& matches,
                              const Rational& stake = Rational(100));

struct TroughToPeak {
    CurvePoint trough;  // global minimum, earliest on ties
    CurvePoint peak;    // maximum at or after the trough, earliest on ties
    Rational gain;      // peak - trough, never negative
};

TroughToPeak trough_to_peak(const WinningsCurve& curve);

struct PeakBeforeEnd {
    CurvePoint peak;     // global maximum, earliest on ties
    Rational forfeited;  // peak - final value, never negative
};

PeakBeforeEnd peak_before_end(const WinningsCurve& curve);

}  // namespace betsim
