#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "betsim/ledger.hpp"
#include "test_util.hpp"

using namespace betsim;
using testutil::day_offset;
using testutil::line_of;
using testutil::match_of;

namespace {

const Date kStart{2016, 3, 1};

WinningsCurve curve_of(const std::vector<int>& values) {
    WinningsCurve curve;
    for (std::size_t i = 0; i < values.size(); ++i)
        curve.push_back({day_offset(kStart, static_cast<int>(i)), Rational(values[i])});
    return curve;
}

}  // namespace

TEST_SUITE("ledger.run_backtest") {
    TEST_CASE("two same-day favorites at 200 and 400 end the day at +75") {
        // Hand-settled: 10000/200 = 50 and 10000/400 = 25.
        std::vector<MatchRecord> matches = {
            match_of(kStart, "H1", "A1", "H1", line_of("H1", "A1", 200, 180)),
            match_of(kStart, "H2", "A2", "H2", line_of("H2", "A2", 400, 330))};
        std::map<std::string, std::string> picks = {{matches[0].match_id, "H1"},
                                                    {matches[1].match_id, "H2"}};
        BacktestResult result = run_backtest(matches, picks);
        CHECK(result.total == Rational(75));
        REQUIRE(result.curve.size() == 1);
        CHECK(result.curve[0].cumulative == Rational(75));
        REQUIRE(result.entries.size() == 2);
        CHECK(result.entries[0].cumulative == Rational(75));  // day-end, shared
        CHECK(result.entries[1].cumulative == Rational(75));
    }

    TEST_CASE("no matches, empty ledger and curve") {
        BacktestResult result = run_backtest({}, {});
        CHECK(result.entries.empty());
        CHECK(result.curve.empty());
        CHECK(result.total == Rational(0));
    }

    TEST_CASE("one Pick 'em predicted wrong ends at -100") {
        std::vector<MatchRecord> matches = {
            match_of(kStart, "H", "A", "A", line_of("H", "A", 110, -110))};
        BacktestResult result = run_backtest(matches, {{matches[0].match_id, "H"}});
        CHECK(result.total == Rational(-100));
        CHECK(result.curve.back().cumulative == Rational(-100));
    }

    TEST_CASE("missing or invalid picks are rejected") {
        std::vector<MatchRecord> matches = {
            match_of(kStart, "H", "A", "H", line_of("H", "A", 150, 130))};
        CHECK_THROWS_AS(run_backtest(matches, {}), std::invalid_argument);
        CHECK_THROWS_AS(run_backtest(matches, {{matches[0].match_id, "X"}}),
                        std::invalid_argument);
    }

    TEST_CASE("stake scales every delta") {
        std::vector<MatchRecord> matches = {
            match_of(kStart, "H", "A", "H", line_of("H", "A", 200, 180))};
        BacktestResult result = run_backtest(matches, {{matches[0].match_id, "H"}}, Rational(50));
        CHECK(result.total == Rational(25));
    }

    TEST_CASE("cumulative is reported at day granularity") {
        std::vector<MatchRecord> matches = {
            match_of(kStart, "H1", "A1", "H1", line_of("H1", "A1", 200, 180)),
            match_of(day_offset(kStart, 1), "H2", "A2", "A2", line_of("H2", "A2", 200, 180))};
        std::map<std::string, std::string> picks = {{matches[0].match_id, "H1"},
                                                    {matches[1].match_id, "H2"}};
        BacktestResult result = run_backtest(matches, picks);
        REQUIRE(result.curve.size() == 2);
        CHECK(result.curve[0].cumulative == Rational(50));
        CHECK(result.curve[1].cumulative == Rational(-50));
        CHECK(result.curve[1].cumulative - result.curve[0].cumulative == Rational(-100));
    }

    TEST_CASE("conservation: final curve value equals the sum of settle deltas") {
        std::mt19937 rng(17);
        std::uniform_int_distribution<std::size_t> line_pick(0, testutil::line_menu().size() - 1);
        std::uniform_int_distribution<int> coin(0, 1);
        std::uniform_int_distribution<int> day(0, 20);
        for (int instance = 0; instance < 50; ++instance) {
            std::vector<MatchRecord> matches;
            std::map<std::string, std::string> picks;
            Rational expected(0);
            const int n = 3 + instance % 40;
            for (int m = 0; m < n; ++m) {
                std::string home = "H" + std::to_string(m);
                std::string away = "A" + std::to_string(m);
                MoneyLine line = coin(rng) == 0
                                     ? line_of(home, away, 110, -110)
                                     : line_of(home, away, testutil::line_menu()[line_pick(rng)],
                                               testutil::line_menu()[line_pick(rng)]);
                std::string winner = coin(rng) ? home : away;
                MatchRecord match = match_of(day_offset(kStart, day(rng)), home, away, winner, line);
                std::string pick = coin(rng) ? home : away;
                expected += settle(line, pick, winner).delta;
                picks[match.match_id] = pick;
                matches.push_back(std::move(match));
            }
            BacktestResult first = run_backtest(matches, picks);
            CHECK(first.total == expected);
            if (!first.curve.empty()) CHECK(first.curve.back().cumulative == expected);

            // Consecutive curve points differ by exactly that day's deltas.
            std::map<long, Rational> day_sums;
            for (const LedgerEntry& entry : first.entries)
                day_sums[entry.date.day_number()] += entry.outcome.delta;
            Rational previous(0);
            for (const CurvePoint& point : first.curve) {
                CHECK(point.cumulative - previous == day_sums.at(point.date.day_number()));
                previous = point.cumulative;
            }

            // Determinism: identical inputs, identical ledgers.
            BacktestResult second = run_backtest(matches, picks);
            REQUIRE(second.entries.size() == first.entries.size());
            for (std::size_t i = 0; i < first.entries.size(); ++i) {
                CHECK(second.entries[i].match_id == first.entries[i].match_id);
                CHECK(second.entries[i].cumulative == first.entries[i].cumulative);
                CHECK(second.entries[i].outcome.delta == first.entries[i].outcome.delta);
            }
        }
    }
}

TEST_SUITE("ledger.vegas_baseline") {
    TEST_CASE("67 matches, 5 Pick 'ems, 46 of 62 favorites win") {
        std::vector<MatchRecord> matches;
        for (int m = 0; m < 62; ++m) {
            std::string home = "H" + std::to_string(m);
            std::string away = "A" + std::to_string(m);
            // favourite = home; first 46 favorites win
            matches.push_back(match_of(day_offset(kStart, m % 10), home, away,
                                       m < 46 ? home : away, line_of(home, away, 150, 130)));
        }
        for (int m = 0; m < 5; ++m) {
            std::string home = "PH" + std::to_string(m);
            std::string away = "PA" + std::to_string(m);
            matches.push_back(
                match_of(day_offset(kStart, m), home, away, home, line_of(home, away, 110, -110)));
        }
        BaselineReport report = vegas_baseline(matches);
        CHECK(report.n_matches == 67);
        CHECK(report.n_pickems == 5);
        REQUIRE(report.acc_without_pickems.has_value());
        CHECK(*report.acc_without_pickems == Rational(46, 62));
        CHECK(report.acc_without_pickems->to_string(4) == "0.7419");
        CHECK(report.worst_acc == Rational(46, 67));
        CHECK(report.best_acc == Rational(51, 67));
        CHECK(report.best_acc.to_string(4) == "0.7612");  // 51/67, half-up
        CHECK(report.best_payout - report.worst_payout == pickem_swing() * 5);
        CHECK(report.expected_payout == (report.best_payout + report.worst_payout) / Rational(2));
        CHECK(report.expected_acc == (report.best_acc + report.worst_acc) / Rational(2));
    }

    TEST_CASE("all matches Pick 'ems") {
        std::vector<MatchRecord> matches;
        for (int m = 0; m < 4; ++m) {
            std::string home = "H" + std::to_string(m);
            std::string away = "A" + std::to_string(m);
            matches.push_back(
                match_of(kStart, home, away, home, line_of(home, away, 110, -110)));
        }
        BaselineReport report = vegas_baseline(matches);
        CHECK_FALSE(report.acc_without_pickems.has_value());
        CHECK(report.best_payout == Rational(10000, 110) * 4);
        CHECK(report.worst_payout == Rational(-400));
        CHECK(report.best_acc == Rational(1));
        CHECK(report.worst_acc == Rational(0));
    }

    TEST_CASE("no Pick 'ems collapses the envelope") {
        std::vector<MatchRecord> matches = {
            match_of(kStart, "H", "A", "H", line_of("H", "A", 200, 180)),
            match_of(kStart, "H2", "A2", "A2", line_of("H2", "A2", 300, 250))};
        BaselineReport report = vegas_baseline(matches);
        CHECK(report.best_payout == report.worst_payout);
        CHECK(report.best_payout == report.expected_payout);
        CHECK(report.best_payout == report.payout_without_pickems);
        CHECK(report.best_payout == Rational(10000, 200) - Rational(100));
        CHECK(report.best_acc == report.worst_acc);
    }
}

TEST_SUITE("ledger.curve_analytics") {
    TEST_CASE("trough then later peak by inspection") {
        TroughToPeak result = trough_to_peak(curve_of({10, -50, 20, 5}));
        CHECK(result.trough.cumulative == Rational(-50));
        CHECK(result.peak.cumulative == Rational(20));
        CHECK(result.gain == Rational(70));
    }

    TEST_CASE("monotone decreasing: trough is the last point, gain 0") {
        TroughToPeak result = trough_to_peak(curve_of({50, 20, -10}));
        CHECK(result.trough.cumulative == Rational(-10));
        CHECK(result.peak.cumulative == Rational(-10));
        CHECK(result.trough.date == result.peak.date);
        CHECK(result.gain == Rational(0));
    }

    TEST_CASE("ties resolve to the earliest date") {
        WinningsCurve curve = curve_of({5, -30, 10, -30, 10});
        TroughToPeak result = trough_to_peak(curve);
        CHECK(result.trough.date == curve[1].date);
        CHECK(result.peak.date == curve[2].date);
        CHECK(result.gain == Rational(40));
    }

    TEST_CASE("gain agrees with the quadratic-scan oracle on random curves") {
        std::mt19937 rng(23);
        std::uniform_int_distribution<int> delta(-40, 40);
        for (int instance = 0; instance < 100; ++instance) {
            std::vector<int> values;
            int running = 0;
            const int n = 2 + instance % 25;
            for (int i = 0; i < n; ++i) {
                running += delta(rng);
                values.push_back(running);
            }
            // Oracle: earliest global minimum, then the best v(j) - v(min)
            // over j >= that index, scanned exhaustively.
            std::size_t trough = 0;
            for (std::size_t i = 1; i < values.size(); ++i)
                if (values[i] < values[trough]) trough = i;
            int best_gain = 0;
            for (std::size_t j = trough; j < values.size(); ++j)
                best_gain = std::max(best_gain, values[j] - values[trough]);

            TroughToPeak result = trough_to_peak(curve_of(values));
            CHECK(result.gain == Rational(best_gain));
            CHECK(result.trough.cumulative == Rational(values[trough]));
        }
    }

    TEST_CASE("peak before the end and the forfeited amount") {
        PeakBeforeEnd result = peak_before_end(curve_of({0, 700, 100}));
        CHECK(result.peak.cumulative == Rational(700));
        CHECK(result.forfeited == Rational(600));

        PeakBeforeEnd increasing = peak_before_end(curve_of({-10, 0, 40}));
        CHECK(increasing.forfeited == Rational(0));

        WinningsCurve constant = curve_of({12, 12, 12});
        PeakBeforeEnd flat = peak_before_end(constant);
        CHECK(flat.forfeited == Rational(0));
        CHECK(flat.peak.date == constant[0].date);
    }

    TEST_CASE("a single-point curve is its own trough and peak") {
        WinningsCurve curve = curve_of({-42});
        TroughToPeak result = trough_to_peak(curve);
        CHECK(result.trough.cumulative == Rational(-42));
        CHECK(result.peak.cumulative == Rational(-42));
        CHECK(result.gain == Rational(0));
        CHECK(peak_before_end(curve).forfeited == Rational(0));
    }

    TEST_CASE("empty curves are rejected") {
        CHECK_THROWS_AS(trough_to_peak({}), std::invalid_argument);
        CHECK_THROWS_AS(peak_before_end({}), std::invalid_argument);
    }
}
