#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "betsim/ingest.hpp"
#include "betsim/pipeline.hpp"

using namespace betsim;
namespace fs = std::filesystem;

namespace {

struct TempSeason {
    fs::path dir;

    explicit TempSeason(const std::string& name) : dir(fs::temp_directory_path() / name) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }

    std::string write(const std::string& filename, const std::string& content) const {
        fs::path path = dir / filename;
        std::ofstream out(path);
        out << content;
        return path.string();
    }

    std::string config_json(const std::string& extra = "") const {
        std::ostringstream json;
        json << "{\n"
             << "  \"sport\": \"custom\",\n"
             << "  \"schema\": {\n"
             << "    \"stats\": [\"fga\", \"oreb\", \"to\", \"fta\"],\n"
             << "    \"possession_formula\": {\"fga\": 1, \"oreb\": -1, \"to\": 1, \"fta\": 0.475},\n"
             << "    \"normalize_target\": 65,\n"
             << "    \"adjust_stats\": [\"points_for\"]\n"
             << "  },\n"
             << "  \"files\": {\n"
             << "    \"schedule\": \"" << (dir / "schedule.csv").string() << "\",\n"
             << "    \"lines\": \"" << (dir / "lines.csv").string() << "\",\n"
             << "    \"game_log\": \"" << (dir / "gamelog.csv").string() << "\"\n"
             << "  }" << (extra.empty() ? "" : ",\n" + extra) << "\n}\n";
        return write("config.json", json.str());
    }
};

const char* kLogHeader = "date,team,opponent,venue,points_for,points_against,fga,oreb,to,fta\n";

std::string log_pair(const std::string& date, const std::string& home, const std::string& away,
                     int home_points, int away_points) {
    std::ostringstream out;
    out << date << "," << home << "," << away << ",home," << home_points << "," << away_points
        << ",60,5,10,0\n";
    out << date << "," << away << "," << home << ",away," << away_points << "," << home_points
        << ",60,5,10,0\n";
    return out.str();
}

// Two days of warm-up games, two playable match days.
void write_standard_season(const TempSeason& season) {
    std::string log = kLogHeader;
    log += log_pair("2016-11-01", "P", "Q", 80, 70);
    log += log_pair("2016-11-01", "R", "S", 75, 72);
    log += log_pair("2016-11-02", "P", "R", 68, 66);
    log += log_pair("2016-11-02", "Q", "S", 90, 60);
    log += log_pair("2016-11-03", "P", "S", 71, 69);
    log += log_pair("2016-11-03", "Q", "R", 77, 70);
    season.write("gamelog.csv", log);

    season.write("schedule.csv",
                 "date,away_team,home_team,away_score,home_score\n"
                 "2016-11-03,S,P,69,71\n"
                 "2016-11-03,R,Q,70,77\n");

    season.write("lines.csv",
                 "date,away_team,home_team,fav_team,dog_team,fav_line,dog_line,book_id\n"
                 "2016-11-03,S,P,P,S,175,155,book_a\n"
                 "2016-11-03,S,P,P,S,165,145,book_b\n"
                 "2016-11-03,R,Q,Q,R,150,130,book_a\n");
}

}  // namespace

TEST_SUITE("ingest.join") {
    TEST_CASE("fully quoted schedule joins every row") {
        TempSeason season("betsim_ingest_full");
        write_standard_season(season);
        SeasonConfig config = load_config(season.config_json());
        IngestResult result = ingest_and_join(config);
        CHECK(result.report.schedule_rows == 2);
        CHECK(result.report.matched == 2);
        CHECK(result.report.unquoted == 0);
        CHECK(result.report.unplayed_quotes == 0);
        CHECK(result.report.rejected.empty());
        REQUIRE(result.matches.size() == 2);

        // Two books quoting S@P merge element-wise: min(10000/175, 10000/165)
        // and min(155, 145).
        const MatchRecord& merged = result.matches[0];
        CHECK(merged.match_id == "2016-11-03_S@P");
        CHECK(merged.line.fav_payout == Rational(400, 7));
        CHECK(merged.line.dog_payout == Rational(145));
        CHECK(merged.winner == "P");
    }

    TEST_CASE("missing quotes leave the match unquoted, conservation holds") {
        TempSeason season("betsim_ingest_unquoted");
        write_standard_season(season);
        season.write("lines.csv",
                     "date,away_team,home_team,fav_team,dog_team,fav_line,dog_line,book_id\n"
                     "2016-11-03,S,P,P,S,175,155,book_a\n"
                     "2016-11-04,S,Q,Q,S,150,130,book_a\n");  // unplayed
        SeasonConfig config = load_config(season.config_json());
        IngestResult result = ingest_and_join(config);
        CHECK(result.report.matched == 1);
        CHECK(result.report.unquoted == 1);
        CHECK(result.report.unplayed_quotes == 1);
        CHECK(result.report.matched + result.report.unquoted == result.report.schedule_rows);
        CHECK(result.matches.size() == 1);
    }

    TEST_CASE("bad rows are collected, not fatal") {
        TempSeason season("betsim_ingest_badrows");
        write_standard_season(season);
        season.write("schedule.csv",
                     "date,away_team,home_team,away_score,home_score\n"
                     "2016-11-03,S,P,69,71\n"
                     "2016-11-03,S,P,69,71\n"        // duplicate key
                     "2016-11-03,R,Q,70,70\n"        // tie
                     "not-a-date,R,Q,70,77\n"        // bad date
                     "2016-11-03,Q,Q,70,77\n");      // same team twice
        SeasonConfig config = load_config(season.config_json());
        IngestResult result = ingest_and_join(config);
        CHECK(result.report.schedule_rows == 1);
        CHECK(result.report.rejected.size() == 4);
        CHECK(result.matches.size() == 1);
    }

    TEST_CASE("books disagreeing on the favorite reject the quote set") {
        TempSeason season("betsim_ingest_disagree");
        write_standard_season(season);
        season.write("lines.csv",
                     "date,away_team,home_team,fav_team,dog_team,fav_line,dog_line,book_id\n"
                     "2016-11-03,S,P,P,S,175,155,book_a\n"
                     "2016-11-03,S,P,S,P,175,155,book_b\n"
                     "2016-11-03,R,Q,Q,R,150,130,book_a\n");
        SeasonConfig config = load_config(season.config_json());
        IngestResult result = ingest_and_join(config);
        CHECK(result.report.matched == 1);
        CHECK(result.report.unquoted == 1);
        REQUIRE(result.matches.size() == 1);
        CHECK(result.matches[0].match_id == "2016-11-03_R@Q");
        CHECK_FALSE(result.report.rejected.empty());
    }

    TEST_CASE("the skip window excludes early matches but accounts for them") {
        TempSeason season("betsim_ingest_skip");
        write_standard_season(season);
        SeasonConfig config = load_config(season.config_json("  \"skip_days\": 1"));
        // Season starts at the first schedule date, 2016-11-03; skip one day.
        IngestResult result = ingest_and_join(config);
        CHECK(result.report.matched == 2);
        CHECK(result.report.skipped == 2);
        CHECK(result.matches.empty());
    }

    TEST_CASE("an explicit is_pickem flag replaces the sentinel") {
        TempSeason season("betsim_ingest_pickem_flag");
        write_standard_season(season);
        season.write("lines.csv",
                     "date,away_team,home_team,fav_team,dog_team,fav_line,dog_line,book_id,"
                     "is_pickem\n"
                     "2016-11-03,S,P,P,S,,,book_a,1\n"          // flagged, empty lines
                     "2016-11-03,R,Q,Q,R,110,-110,book_a,yes\n"  // flagged, sentinel lines
                     "2016-11-03,R,Q,Q,R,150,130,book_b,1\n");   // contradiction
        SeasonConfig config = load_config(season.config_json());
        IngestResult result = ingest_and_join(config);
        CHECK(result.report.matched == 2);
        REQUIRE(result.matches.size() == 2);
        CHECK(result.matches[0].line.is_pickem);
        CHECK(result.matches[0].line.fav_payout == Rational(10000, 110));
        CHECK(result.matches[1].line.is_pickem);
        REQUIRE(result.report.rejected.size() == 1);
        CHECK(result.report.rejected[0].reason.find("is_pickem") != std::string::npos);
    }

    TEST_CASE("team aliases normalize names across files") {
        TempSeason season("betsim_ingest_alias");
        write_standard_season(season);
        season.write("schedule.csv",
                     "date,away_team,home_team,away_score,home_score\n"
                     "2016-11-03,Sharks,P,69,71\n"
                     "2016-11-03,R,Q,70,77\n");
        SeasonConfig config = load_config(
            season.config_json("  \"team_aliases\": {\"Sharks\": \"S\"}"));
        IngestResult result = ingest_and_join(config);
        CHECK(result.report.matched == 2);
        REQUIRE(!result.matches.empty());
        CHECK(result.matches[0].away_team == "S");
    }

    TEST_CASE("game log rows that contradict the schedule are rejected") {
        TempSeason season("betsim_ingest_contradict");
        write_standard_season(season);
        std::string log = kLogHeader;
        log += log_pair("2016-11-01", "P", "Q", 80, 70);
        log += log_pair("2016-11-01", "R", "S", 75, 72);
        log += log_pair("2016-11-03", "P", "S", 69, 71);  // schedule says P won
        season.write("gamelog.csv", log);
        SeasonConfig config = load_config(season.config_json());
        IngestResult result = ingest_and_join(config);
        CHECK(result.report.rejected.size() == 2);  // both sides of the pair
        CHECK(result.game_log.rows().size() == 4);
    }
}

TEST_SUITE("ingest.config") {
    TEST_CASE("defaults are loaded and echoed") {
        TempSeason season("betsim_config_defaults");
        write_standard_season(season);
        SeasonConfig config = load_config(season.config_json());
        CHECK(config.schema.id == "custom");
        CHECK(config.stake == Rational(100));
        CHECK(config.skip_days == 0);
        CHECK(config.weights.scheme == RecencyWeights::Scheme::exponential);
        CHECK(config.weights.parameter == doctest::Approx(0.95));
        CHECK(config.fixed_point.tolerance == doctest::Approx(1e-9));
        CHECK(config.fixed_point.max_iterations == 5000);
        std::string description = describe_config(config);
        CHECK(description.find("stake: 100.00") != std::string::npos);
        CHECK(description.find("exponential 0.95") != std::string::npos);
        CHECK(description.find("tolerance 1e-09") != std::string::npos);
    }

    TEST_CASE("predictor specs parse with their parameters") {
        TempSeason season("betsim_config_predictors");
        write_standard_season(season);
        std::string extra =
            "  \"predictors\": [\n"
            "    {\"id\": \"kp\", \"type\": \"kp\", \"pyth_exponent\": 10.25, "
            "\"home_advantage\": 1.02},\n"
            "    {\"id\": \"srs\", \"type\": \"srs\", \"home_bonus\": 2.5},\n"
            "    {\"id\": \"nb\", \"type\": \"nb\", \"kernel\": true},\n"
            "    {\"id\": \"ann\", \"type\": \"external\", \"file\": \"picks.csv\"}\n"
            "  ]";
        SeasonConfig config = load_config(season.config_json(extra));
        REQUIRE(config.predictors.size() == 4);
        CHECK(config.predictors[0].kp.pyth_exponent == doctest::Approx(10.25));
        CHECK(config.predictors[1].srs_home_bonus == doctest::Approx(2.5));
        CHECK(config.predictors[2].nb_kernel);
        CHECK_FALSE(config.predictors[2].nb_features.empty());
        CHECK(config.predictors[3].picks_file == "picks.csv");
    }

    TEST_CASE("bad configurations are rejected") {
        TempSeason season("betsim_config_bad");
        write_standard_season(season);
        CHECK_THROWS(load_config(season.config_json("  \"skip_days\": -1")));
        CHECK_THROWS(load_config(season.config_json("  \"stake\": 0")));
        CHECK_THROWS(load_config(season.config_json(
            "  \"predictors\": [{\"id\": \"x\", \"type\": \"nonsense\"}]")));
        CHECK_THROWS(load_config(season.config_json(
            "  \"predictors\": [{\"id\": \"x\", \"type\": \"srs\"}, {\"id\": \"x\", \"type\": "
            "\"srs\"}]")));
        CHECK_THROWS(load_config(season.config_json("  \"recency_weights\": {\"scheme\": "
                                                    "\"exponential\", \"parameter\": 1.5}")));
    }
}

TEST_SUITE("ingest.pipeline") {
    TEST_CASE("baseline-only run emits the baseline table and no curves") {
        TempSeason season("betsim_pipe_baseline");
        write_standard_season(season);
        SeasonConfig config = load_config(season.config_json());
        PipelineOptions options;
        options.out_dir = (season.dir / "out").string();
        PipelineResult result = run_pipeline(config, options);
        CHECK(result.exit_code == 0);
        REQUIRE(result.baseline.has_value());
        CHECK(result.baseline->n_matches == 2);
        bool has_baseline = false, has_curve = false;
        for (const std::string& file : result.files_written) {
            if (file.find("baseline.txt") != std::string::npos) has_baseline = true;
            if (file.find("curve_") != std::string::npos) has_curve = true;
        }
        CHECK(has_baseline);
        CHECK_FALSE(has_curve);
    }

    TEST_CASE("kp plus external picks produce two curves and a categorization") {
        TempSeason season("betsim_pipe_two");
        write_standard_season(season);
        season.write("picks.csv",
                     "match_id,pick_team\n"
                     "2016-11-03_S@P,S\n"
                     "2016-11-03_R@Q,Q\n");
        std::string extra =
            "  \"predictors\": [\n"
            "    {\"id\": \"kp\", \"type\": \"kp\"},\n"
            "    {\"id\": \"ann\", \"type\": \"external\", \"file\": \"" +
            (season.dir / "picks.csv").string() +
            "\"}\n"
            "  ]";
        SeasonConfig config = load_config(season.config_json(extra));
        PipelineOptions options;
        options.out_dir = (season.dir / "out").string();
        PipelineResult result = run_pipeline(config, options);
        CHECK(result.exit_code == 0);
        REQUIRE(result.predictors.size() == 2);
        CHECK(result.predictors[0].entries.size() == 2);
        CHECK(result.predictors[1].entries.size() == 2);
        int curves = 0;
        for (const std::string& file : result.files_written)
            if (file.find("curve_") != std::string::npos) ++curves;
        CHECK(curves == 2);

        // Reruns are byte-identical.
        auto slurp = [](const std::string& path) {
            std::ifstream in(path, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        std::map<std::string, std::string> before;
        for (const std::string& file : result.files_written) before[file] = slurp(file);
        PipelineResult again = run_pipeline(config, options);
        CHECK(again.exit_code == 0);
        REQUIRE(again.files_written == result.files_written);
        for (const std::string& file : again.files_written) CHECK(slurp(file) == before.at(file));

        // The predictor filter narrows the run to the named ids.
        PipelineOptions filtered = options;
        filtered.out_dir = (season.dir / "out_ann").string();
        filtered.predictor_filter = {"ann"};
        PipelineResult only_ann = run_pipeline(config, filtered);
        CHECK(only_ann.exit_code == 0);
        REQUIRE(only_ann.predictors.size() == 1);
        CHECK(only_ann.predictors[0].id == "ann");
    }

    TEST_CASE("empty match sets and unknown predictors exit nonzero") {
        TempSeason season("betsim_pipe_empty");
        write_standard_season(season);
        season.write("lines.csv",
                     "date,away_team,home_team,fav_team,dog_team,fav_line,dog_line,book_id\n");
        SeasonConfig config = load_config(season.config_json());
        PipelineOptions options;
        options.out_dir = (season.dir / "out").string();
        PipelineResult result = run_pipeline(config, options);
        CHECK(result.exit_code == 1);
        CHECK_FALSE(result.errors.empty());

        TempSeason season2("betsim_pipe_unknown");
        write_standard_season(season2);
        SeasonConfig config2 = load_config(season2.config_json());
        PipelineOptions options2;
        options2.out_dir = (season2.dir / "out").string();
        options2.predictor_filter = {"nope"};
        PipelineResult result2 = run_pipeline(config2, options2);
        CHECK(result2.exit_code == 1);
    }
}
