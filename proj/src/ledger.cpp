#include "betsim/ledger.hpp"

#include <algorithm>
#include <stdexcept>

namespace betsim {

void validate_match(const MatchRecord& match) {
    if (match.winner != match.home_team && match.winner != match.away_team)
        throw std::invalid_argument("match " + match.match_id + ": winner '" + match.winner +
                                    "' is not a participant");
    if (match.home_score && match.away_score) {
        if (*match.home_score == *match.away_score)
            throw std::invalid_argument("match " + match.match_id +
                                        ": tied scores are not supported");
        const std::string& by_score =
            *match.home_score > *match.away_score ? match.home_team : match.away_team;
        if (by_score != match.winner)
            throw std::invalid_argument("match " + match.match_id +
                                        ": winner contradicts the scores");
    }
    if (!match.line.has_team(match.home_team) || !match.line.has_team(match.away_team))
        throw std::invalid_argument("match " + match.match_id +
                                    ": money line names different teams");
}

namespace {

Rational scaled_delta(const BetOutcome& outcome, const Rational& stake) {
    return outcome.delta * stake / Rational(100);
}

}  // namespace

BacktestResult run_backtest(const std::vector<MatchRecord>& matches,
                            const std::map<std::string, std::string>& picks,
                            const Rational& stake) {
    if (!(stake > Rational(0))) throw std::invalid_argument("run_backtest: stake must be positive");

    std::vector<std::size_t> order(matches.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return matches[a].date < matches[b].date;
    });

    BacktestResult result;
    result.entries.reserve(matches.size());
    Rational cumulative(0);
    std::size_t day_begin = 0;

    auto close_day = [&](std::size_t day_end) {
        if (day_begin == day_end) return;
        for (std::size_t i = day_begin; i < day_end; ++i)
            result.entries[i].cumulative = cumulative;
        result.curve.push_back({result.entries[day_begin].date, cumulative});
        day_begin = day_end;
    };

    for (std::size_t idx : order) {
        const MatchRecord& match = matches[idx];
        validate_match(match);
        auto it = picks.find(match.match_id);
        if (it == picks.end())
            throw std::invalid_argument("run_backtest: no pick for match " + match.match_id);
        const std::string& pick = it->second;
        if (pick != match.home_team && pick != match.away_team)
            throw std::invalid_argument("run_backtest: pick '" + pick +
                                        "' is not a participant of match " + match.match_id);
        if (!result.entries.empty() && result.entries.back().date != match.date)
            close_day(result.entries.size());

        LedgerEntry entry;
        entry.match_id = match.match_id;
        entry.date = match.date;
        entry.pick = pick;
        entry.outcome = settle(match.line, pick, match.winner);
        entry.outcome.delta = scaled_delta(entry.outcome, stake);
        cumulative += entry.outcome.delta;
        result.entries.push_back(std::move(entry));
    }
    close_day(result.entries.size());
    result.total = cumulative;
    return result;
}

BaselineReport vegas_baseline(const std::vector<MatchRecord>& matches, const Rational& stake) {
    if (!(stake > Rational(0)))
        throw std::invalid_argument("vegas_baseline: stake must be positive");

    BaselineReport report;
    report.n_matches = matches.size();
    Rational base_payout(0);
    std::size_t correct_favs = 0;

    for (const MatchRecord& match : matches) {
        validate_match(match);
        if (match.line.is_pickem) {
            ++report.n_pickems;
            continue;
        }
        BetOutcome outcome = settle(match.line, match.line.fav_team, match.winner);
        base_payout += scaled_delta(outcome, stake);
        if (outcome.correct()) ++correct_favs;
    }

    report.payout_without_pickems = base_payout;
    const std::size_t n = report.n_matches;
    const std::size_t n_pickems = report.n_pickems;
    const std::size_t quoted = n - n_pickems;
    if (quoted > 0)
        report.acc_without_pickems =
            Rational(static_cast<std::int64_t>(correct_favs), static_cast<std::int64_t>(quoted));

    Rational per_pickem_win = pickem_payout() * stake / Rational(100);
    Rational pickems(static_cast<std::int64_t>(n_pickems));
    report.best_payout = base_payout + pickems * per_pickem_win;
    report.worst_payout = base_payout - pickems * stake;
    report.expected_payout = (report.best_payout + report.worst_payout) / Rational(2);

    if (n > 0) {
        Rational total(static_cast<std::int64_t>(n));
        report.best_acc =
            Rational(static_cast<std::int64_t>(correct_favs + n_pickems)) / total;
        report.worst_acc = Rational(static_cast<std::int64_t>(correct_favs)) / total;
        report.expected_acc = (report.best_acc + report.worst_acc) / Rational(2);
    }
    return report;
}

TroughToPeak trough_to_peak(const WinningsCurve& curve) {
    if (curve.empty()) throw std::invalid_argument("trough_to_peak: empty curve");
    std::size_t trough = 0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (curve[i].cumulative < curve[trough].cumulative) trough = i;
    std::size_t peak = trough;
    for (std::size_t i = trough + 1; i < curve.size(); ++i)
        if (curve[i].cumulative > curve[peak].cumulative) peak = i;
    return {curve[trough], curve[peak], curve[peak].cumulative - curve[trough].cumulative};
}

PeakBeforeEnd peak_before_end(const WinningsCurve& curve) {
    if (curve.empty()) throw std::invalid_argument("peak_before_end: empty curve");
    std::size_t peak = 0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (curve[i].cumulative > curve[peak].cumulative) peak = i;
    return {curve[peak], curve[peak].cumulative - curve.back().cumulative};
}

}  // namespace betsim
