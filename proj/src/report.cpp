#include "betsim/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace betsim {

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::regular: return "regular";
        case Phase::post: return "post";
        case Phase::combined: return "combined";
    }
    return "unknown";
}

CategorizationCounts categorize(const std::vector<LedgerEntry>& entries,
                                const std::vector<MatchRecord>& matches) {
    std::set<std::string> entry_ids;
    for (const LedgerEntry& entry : entries) entry_ids.insert(entry.match_id);
    std::set<std::string> match_ids;
    for (const MatchRecord& match : matches) match_ids.insert(match.match_id);
    if (entry_ids != match_ids)
        throw std::invalid_argument("categorize: ledger and match set cover different matches");

    CategorizationCounts counts;
    for (const MatchRecord& match : matches)
        if (match.line.is_pickem) ++counts.pickem_total;
    for (const LedgerEntry& entry : entries) {
        switch (entry.outcome.category) {
            case BetCategory::fav_correct: ++counts.correct_favs; break;
            case BetCategory::dog_correct: ++counts.correct_dogs; break;
            case BetCategory::pickem_correct: ++counts.correct_pickems; break;
            case BetCategory::incorrect: break;
        }
    }
    return counts;
}

namespace {

void accumulate(PhaseSummary& summary, const LedgerEntry& entry) {
    ++summary.n;
    if (entry.outcome.correct()) ++summary.correct;
    summary.payout += entry.outcome.delta;
}

void finish(PhaseSummary& summary) {
    if (summary.n > 0)
        summary.accuracy = Rational(static_cast<std::int64_t>(summary.correct),
                                    static_cast<std::int64_t>(summary.n));
}

}  // namespace

SummaryBreakdown summarize(const std::vector<LedgerEntry>& entries, const SeasonSplit& split) {
    SummaryBreakdown breakdown;
    for (const LedgerEntry& entry : entries) {
        accumulate(breakdown.combined, entry);
        if (split.phase_of(entry.date) == Phase::post)
            accumulate(breakdown.post, entry);
        else
            accumulate(breakdown.regular, entry);
    }
    finish(breakdown.regular);
    finish(breakdown.post);
    finish(breakdown.combined);
    return breakdown;
}

namespace {

std::string pad(const std::string& text, std::size_t width) {
    if (text.size() >= width) return text;
    return std::string(width - text.size(), ' ') + text;
}

std::string render_row(const std::vector<std::string>& cells,
                       const std::vector<std::size_t>& widths) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out += "  ";
        out += pad(cells[i], widths[i]);
    }
    out += '\n';
    return out;
}

std::string aligned_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows) out += render_row(row, widths);
    return out;
}

std::string acc_or_dash(const std::optional<Rational>& value) {
    return value ? value->to_string(4) : "-";
}

std::string pickem_cell(const CategorizationCounts& counts) {
    std::string out = std::to_string(counts.correct_pickems) + " of " +
                      std::to_string(counts.pickem_total);
    out += " (" + counts.pickem_rate().to_string(2) + ")";
    return out;
}

}  // namespace

std::string render_baseline_table(const BaselineReport& report) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"Accuracy", "Pay-out", "Best Acc.", "Pay-out", "Exp. Acc.", "Pay-out",
                    "Worst Acc.", "Pay-out"});
    rows.push_back({acc_or_dash(report.acc_without_pickems),
                    report.payout_without_pickems.to_string(2), report.best_acc.to_string(4),
                    report.best_payout.to_string(2), report.expected_acc.to_string(4),
                    report.expected_payout.to_string(2), report.worst_acc.to_string(4),
                    report.worst_payout.to_string(2)});
    std::string out = "Vegas baseline over " + std::to_string(report.n_matches) + " matches, " +
                      std::to_string(report.n_pickems) +
                      " Pick 'ems (left: w/o Pick 'ems, right: coin-flip envelope)\n";
    return out + aligned_table(rows);
}

std::string render_categorization_table(const std::vector<PredictorReport>& predictors,
                                        const SeasonSplit& split) {
    std::vector<std::vector<std::string>> rows;
    if (split.boundary) {
        rows.push_back({"Predictor", "Favs", "Dogs", "Pick 'ems", "Favs", "Dogs", "Pick 'ems"});
        for (const PredictorReport& p : predictors)
            rows.push_back({p.id, std::to_string(p.categories_regular.correct_favs),
                            std::to_string(p.categories_regular.correct_dogs),
                            pickem_cell(p.categories_regular),
                            std::to_string(p.categories_post.correct_favs),
                            std::to_string(p.categories_post.correct_dogs),
                            pickem_cell(p.categories_post)});
        return "Correct predictions by money-line characterization "
               "(regular season | post-season)\n" +
               aligned_table(rows);
    }
    rows.push_back({"Predictor", "Favs", "Dogs", "Pick 'ems"});
    for (const PredictorReport& p : predictors)
        rows.push_back({p.id, std::to_string(p.categories.correct_favs),
                        std::to_string(p.categories.correct_dogs), pickem_cell(p.categories)});
    return "Correct predictions by money-line characterization\n" + aligned_table(rows);
}

namespace {

void summary_phase_row(std::vector<std::vector<std::string>>& rows, const std::string& id,
                       const char* phase, const PhaseSummary& summary) {
    rows.push_back({id, phase, std::to_string(summary.n),
                    summary.n > 0 ? summary.accuracy.to_string(4) : "-",
                    summary.payout.to_string(2)});
}

}  // namespace

std::string render_summary(const std::vector<PredictorReport>& predictors,
                           const std::optional<BaselineReport>& baseline,
                           const SeasonSplit& split) {
    std::string out;
    if (baseline) out += render_baseline_table(*baseline) + "\n";
    if (!predictors.empty()) {
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"Predictor", "Phase", "Matches", "Accuracy", "Pay-out"});
        for (const PredictorReport& p : predictors) {
            if (split.boundary) {
                summary_phase_row(rows, p.id, "regular", p.summary.regular);
                summary_phase_row(rows, p.id, "post", p.summary.post);
            }
            summary_phase_row(rows, p.id, "combined", p.summary.combined);
        }
        out += "Backtest summary\n" + aligned_table(rows) + "\n";

        rows.clear();
        rows.push_back({"Predictor", "Trough", "Later peak", "Gain", "Season peak", "Forfeited"});
        for (const PredictorReport& p : predictors) {
            if (p.curve.empty()) {
                rows.push_back({p.id, "-", "-", "-", "-", "-"});
                continue;
            }
            TroughToPeak ttp = trough_to_peak(p.curve);
            PeakBeforeEnd pbe = peak_before_end(p.curve);
            rows.push_back({p.id,
                            ttp.trough.cumulative.to_string(2) + " @ " + ttp.trough.date.to_string(),
                            ttp.peak.cumulative.to_string(2) + " @ " + ttp.peak.date.to_string(),
                            ttp.gain.to_string(2),
                            pbe.peak.cumulative.to_string(2) + " @ " + pbe.peak.date.to_string(),
                            pbe.forfeited.to_string(2)});
        }
        out += "Winnings-curve analytics\n" + aligned_table(rows);
        for (const PredictorReport& p : predictors)
            if (p.skipped_matches > 0)
                out += "note: " + p.id + " skipped " + std::to_string(p.skipped_matches) +
                       " matches it could not pick\n";
    }
    return out;
}

namespace {

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& written) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("short write to " + path);
    written.push_back(path);
}

WinningsCurve phase_window(const WinningsCurve& curve, const SeasonSplit& split, Phase phase) {
    if (phase == Phase::combined || !split.boundary) return curve;
    WinningsCurve out;
    for (const CurvePoint& point : curve)
        if (split.phase_of(point.date) == phase) out.push_back(point);
    return out;
}

}  // namespace

std::vector<std::string> emit_reports(const std::string& out_dir,
                                      const std::vector<PredictorReport>& predictors,
                                      const std::optional<BaselineReport>& baseline,
                                      const SeasonSplit& split, const EmitOptions& options) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir);

    std::vector<std::string> written;
    auto path_of = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

    if (options.tables && baseline) {
        write_file(path_of("baseline.txt"), render_baseline_table(*baseline), written);
        std::string csv =
            "n_matches,n_pickems,acc_without_pickems,payout_without_pickems,best_acc,"
            "best_payout,expected_acc,expected_payout,worst_acc,worst_payout\n";
        csv += std::to_string(baseline->n_matches) + "," + std::to_string(baseline->n_pickems) +
               "," + acc_or_dash(baseline->acc_without_pickems) + "," +
               baseline->payout_without_pickems.to_string(2) + "," +
               baseline->best_acc.to_string(4) + "," + baseline->best_payout.to_string(2) + "," +
               baseline->expected_acc.to_string(4) + "," + baseline->expected_payout.to_string(2) +
               "," + baseline->worst_acc.to_string(4) + "," + baseline->worst_payout.to_string(2) +
               "\n";
        write_file(path_of("baseline.csv"), csv, written);
    }
    if (options.tables && !predictors.empty()) {
        write_file(path_of("categorization.txt"),
                   render_categorization_table(predictors, split), written);
        std::string csv =
            "predictor,phase,correct_favs,correct_dogs,correct_pickems,pickem_total,pickem_rate\n";
        auto csv_row = [&](const PredictorReport& p, Phase phase,
                           const CategorizationCounts& counts) {
            csv += p.id;
            csv += ",";
            csv += to_string(phase);
            csv += "," + std::to_string(counts.correct_favs) + "," +
                   std::to_string(counts.correct_dogs) + "," +
                   std::to_string(counts.correct_pickems) + "," +
                   std::to_string(counts.pickem_total) + "," + counts.pickem_rate().to_string(4) +
                   "\n";
        };
        for (const PredictorReport& p : predictors) {
            if (split.boundary) {
                csv_row(p, Phase::regular, p.categories_regular);
                csv_row(p, Phase::post, p.categories_post);
            }
            csv_row(p, Phase::combined, p.categories);
        }
        write_file(path_of("categorization.csv"), csv, written);
    }
    if (options.tables)
        write_file(path_of("summary.txt"), render_summary(predictors, baseline, split), written);
    if (options.curves) {
        for (const PredictorReport& p : predictors) {
            std::string csv = "date,cumulative\n";
            for (const CurvePoint& point : phase_window(p.curve, split, options.phase))
                csv += point.date.to_string() + "," + point.cumulative.to_string(2) + "\n";
            write_file(path_of("curve_" + p.id + "_" + to_string(options.phase) + ".csv"), csv,
                       written);
        }
    }
    std::sort(written.begin(), written.end());
    return written;
}

}  // namespace betsim
