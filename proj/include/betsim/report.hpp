#pragma once

#include <optional>
#include <string>
#include <vector>

#include "betsim/ledger.hpp"

namespace betsim {

// Correct picks split by money-line characterization.
struct CategorizationCounts {
    std::size_t correct_favs = 0;
    std::size_t correct_dogs = 0;
    std::size_t correct_pickems = 0;
    std::size_t pickem_total = 0;

    std::size_t total_correct() const { return correct_favs + correct_dogs + correct_pickems; }
    Rational pickem_rate() const {
        if (pickem_total == 0) return Rational(0);
        return Rational(static_cast<std::int64_t>(correct_pickems),
                        static_cast<std::int64_t>(pickem_total));
    }
};

// Counts derive solely from the settled outcome categories; `matches` must
// cover exactly the settled match set and supplies the Pick 'em total.
CategorizationCounts categorize(const std::vector<LedgerEntry>& entries,
                                const std::vector<MatchRecord>& matches);

enum class Phase { regular, post, combined };

const char* to_string(Phase phase);

// Splits a season at the first post-season day; with no boundary everything
// is regular season.
struct SeasonSplit {
    std::optional<Date> boundary;

    Phase phase_of(const Date& date) const {
        if (boundary && !(date < *boundary)) return Phase::post;
        return Phase::regular;
    }
};

struct PhaseSummary {
    std::size_t n = 0;
    std::size_t correct = 0;
    Rational accuracy;  // 0 when n == 0
    Rational payout;
};

struct SummaryBreakdown {
    PhaseSummary regular;
    PhaseSummary post;
    PhaseSummary combined;
};

SummaryBreakdown summarize(const std::vector<LedgerEntry>& entries, const SeasonSplit& split);

// Everything reportable about one predictor's backtest.
struct PredictorReport {
    std::string id;
    std::vector<LedgerEntry> entries;
    WinningsCurve curve;
    CategorizationCounts categories;          // whole season
    CategorizationCounts categories_regular;  // filled when a split is active
    CategorizationCounts categories_post;
    SummaryBreakdown summary;
    std::size_t skipped_matches = 0;  // matches the predictor could not pick
};

std::string render_baseline_table(const BaselineReport& report);
std::string render_categorization_table(const std::vector<PredictorReport>& predictors,
                                        const SeasonSplit& split);
std::string render_summary(const std::vector<PredictorReport>& predictors,
                           const std::optional<BaselineReport>& baseline,
                           const SeasonSplit& split);

struct EmitOptions {
    bool tables = true;
    bool curves = true;
    Phase phase = Phase::combined;  // curve files carry this phase label
};

// Writes tables, curve files, and the combined summary under out_dir.
// Output is byte-stable across reruns on identical inputs. Returns the paths
// written, sorted.
std::vector<std::string> emit_reports(const std::string& out_dir,
                                      const std::vector<PredictorReport>& predictors,
                                      const std::optional<BaselineReport>& baseline,
                                      const SeasonSplit& split, const EmitOptions& options);

}  // namespace betsim
