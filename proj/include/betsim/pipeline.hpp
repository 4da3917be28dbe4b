#pragma once

#include <map>
#include <string>
#include <vector>

#include "betsim/ingest.hpp"
#include "betsim/report.hpp"

namespace betsim {

// One predictor's picks over a match set. Matches the predictor could not
// pick (insufficient history or training data) are listed, not guessed.
struct PredictionSet {
    std::string predictor_id;
    std::map<std::string, Prediction> picks;  // keyed by match_id
    std::vector<std::string> skipped;         // match_ids without a pick
};

// Walk-forward predictions for every configured predictor: each match is
// predicted from team representations and training examples dated strictly
// before its own day. Non-converged feature solves are appended to
// `warnings` (with their residuals) when a sink is given.
std::vector<PredictionSet> make_predictions(const SeasonConfig& config,
                                            const std::vector<MatchRecord>& matches,
                                            const GameLog& log,
                                            ExecMode mode = ExecMode::parallel,
                                            std::vector<std::string>* warnings = nullptr);

struct PipelineOptions {
    std::string out_dir = "out";
    EmitOptions emit;
    std::vector<std::string> predictor_filter;  // empty = all configured
    bool run_baseline = true;
    bool run_predictors = true;
    ExecMode mode = ExecMode::parallel;
};

struct PipelineResult {
    int exit_code = 0;
    JoinReport join;
    std::optional<BaselineReport> baseline;
    std::vector<PredictorReport> predictors;
    std::vector<std::string> files_written;
    std::vector<std::string> errors;
};

// Ingest, features, predictions, backtests, baseline, reports. The exit code
// is nonzero when the match set is empty, a requested predictor is unknown,
// or any predictor fails outright.
PipelineResult run_pipeline(const SeasonConfig& config, const PipelineOptions& options);

}  // namespace betsim
