// Command-line front end: ingest/validate a season, run the Vegas baseline,
// backtest the configured predictors, and emit report files.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "betsim/ingest.hpp"
#include "betsim/pipeline.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::string phase = "combined";
    std::vector<std::string> predictors;
    bool serial = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out = true) {
    cmd->add_option("--config", args.config_path, "season configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    if (with_out) cmd->add_option("--out", args.out_dir, "output directory (default: out)");
    cmd->add_option("--phase", args.phase, "curve phase: combined, regular or post")
        ->check(CLI::IsMember({"combined", "regular", "post"}));
    cmd->add_option("--predictor", args.predictors,
                    "restrict to these predictor ids (repeatable)");
    cmd->add_flag("--serial", args.serial, "disable the OpenMP kernels");
}

betsim::Phase phase_of(const std::string& name) {
    if (name == "regular") return betsim::Phase::regular;
    if (name == "post") return betsim::Phase::post;
    return betsim::Phase::combined;
}

int run(const CommonArgs& args, bool baseline, bool predictors, bool tables, bool curves) {
    betsim::SeasonConfig config = betsim::load_config(args.config_path);
    betsim::PipelineOptions options;
    options.out_dir = args.out_dir;
    options.run_baseline = baseline;
    options.run_predictors = predictors;
    options.predictor_filter = args.predictors;
    options.emit.tables = tables;
    options.emit.curves = curves;
    options.emit.phase = phase_of(args.phase);
    options.mode = args.serial ? betsim::ExecMode::serial : betsim::ExecMode::parallel;

    betsim::PipelineResult result = betsim::run_pipeline(config, options);
    std::cout << betsim::describe_join(result.join);
    if (result.predictors.empty()) {
        if (result.baseline) std::cout << "\n" << betsim::render_baseline_table(*result.baseline);
    } else {
        betsim::SeasonSplit split{config.phase_boundary};
        std::cout << "\n" << betsim::render_summary(result.predictors, result.baseline, split);
    }
    if (!result.files_written.empty()) {
        std::cout << "\nwrote:\n";
        for (const std::string& file : result.files_written) std::cout << "  " << file << "\n";
    }
    for (const std::string& error : result.errors) std::cerr << "error: " << error << "\n";
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"money-line backtesting engine"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* ingest = app.add_subcommand("ingest", "validate the season files and print the join report");
    add_common(ingest, args, false);
    CLI::App* baseline = app.add_subcommand("baseline", "always-bet-the-favorite envelope");
    add_common(baseline, args);
    CLI::App* backtest = app.add_subcommand("backtest", "run predictors and emit winnings curves");
    add_common(backtest, args);
    CLI::App* report = app.add_subcommand("report", "emit baseline, categorization and summary tables");
    add_common(report, args);
    CLI::App* all = app.add_subcommand("all", "everything: baseline, backtests, tables and curves");
    add_common(all, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) {
            betsim::SeasonConfig config = betsim::load_config(args.config_path);
            betsim::IngestResult result = betsim::ingest_and_join(config);
            std::cout << betsim::describe_config(config) << "\n"
                      << betsim::describe_join(result.report);
            return result.matches.empty() ? 1 : 0;
        }
        if (baseline->parsed()) return run(args, true, false, true, false);
        if (backtest->parsed()) return run(args, false, true, false, true);
        if (report->parsed()) return run(args, true, true, true, false);
        return run(args, true, true, true, true);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
