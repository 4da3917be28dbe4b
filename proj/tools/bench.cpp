// Compares the OpenMP kernels against the serial reference on a synthetic
// season: per-date snapshot builds and batched posterior evaluation.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "betsim/features.hpp"
#include "betsim/parallel.hpp"
#include "betsim/predictors.hpp"

using namespace betsim;

namespace {

GameLogRow make_row(const Date& date, const std::string& team, const std::string& opponent,
                    Venue venue, double pf, double pa, std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    GameLogRow row;
    row.date = date;
    row.team = team;
    row.opponent = opponent;
    row.venue = venue;
    row.points_for = pf;
    row.points_against = pa;
    row.stats["fga"] = 75.0 + 10.0 * unit(rng);
    row.stats["fgm"] = 30.0 + 8.0 * unit(rng);
    row.stats["fg3a"] = 20.0 + 6.0 * unit(rng);
    row.stats["fg3m"] = 6.0 + 4.0 * unit(rng);
    row.stats["fta"] = 18.0 + 8.0 * unit(rng);
    row.stats["ftm"] = 13.0 + 6.0 * unit(rng);
    row.stats["oreb"] = 8.0 + 4.0 * unit(rng);
    row.stats["dreb"] = 28.0 + 6.0 * unit(rng);
    row.stats["ast"] = 18.0 + 6.0 * unit(rng);
    row.stats["to"] = 10.0 + 5.0 * unit(rng);
    row.stats["stl"] = 5.0 + 3.0 * unit(rng);
    row.stats["blk"] = 3.0 + 3.0 * unit(rng);
    return row;
}

Date next_day(Date d) {
    ++d.day;
    if (!d.valid()) {
        d.day = 1;
        ++d.month;
        if (!d.valid()) {
            d.month = 1;
            ++d.year;
        }
    }
    return d;
}

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

int main(int argc, char** argv) {
    int n_teams = argc > 1 ? std::atoi(argv[1]) : 24;
    int n_dates = argc > 2 ? std::atoi(argv[2]) : 80;
    if (n_teams < 4 || n_dates < 4) {
        std::fprintf(stderr, "usage: %s [teams >= 4] [dates >= 4]\n", argv[0]);
        return 1;
    }

    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> score(78, 118);
    std::vector<std::string> teams;
    for (int t = 0; t < n_teams; ++t) teams.push_back("T" + std::to_string(t));

    std::vector<GameLogRow> rows;
    Date date{2016, 11, 1};
    std::vector<Date> dates;
    for (int d = 0; d < n_dates; ++d) {
        for (int i = 0; 2 * i + 1 < n_teams; ++i) {
            const std::string& home = teams[(i + d) % n_teams];
            const std::string& away = teams[(n_teams - 1 - i + d) % n_teams];
            if (home == away) continue;
            int hp = score(rng), ap = score(rng);
            if (hp == ap) ++hp;
            rows.push_back(make_row(date, home, away, Venue::home, hp, ap, rng));
            rows.push_back(make_row(date, away, home, Venue::away, ap, hp, rng));
        }
        if (d >= 2) dates.push_back(date);  // snapshots once everyone has history
        date = next_day(date);
    }

    GameLog log{rows};
    SportSchema schema = SportSchema::basketball();
    RecencyWeights weights{RecencyWeights::Scheme::exponential, 0.95};

    std::printf("season: %d teams, %d dates, %zu team-games; threads: %d\n", n_teams, n_dates,
                rows.size(), hardware_threads());

    auto t0 = std::chrono::steady_clock::now();
    auto serial = build_snapshots(log, schema, weights, {}, dates, ExecMode::serial);
    double serial_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    auto parallel = build_snapshots(log, schema, weights, {}, dates, ExecMode::parallel);
    double parallel_ms = ms_since(t0);

    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i) {
        if (serial[i].teams.size() != parallel[i].teams.size()) identical = false;
        for (const auto& [team, features] : serial[i].teams) {
            const TeamFeatures& other = parallel[i].teams.at(team);
            if (features.basic != other.basic || features.adj_oe != other.adj_oe ||
                features.srs_rating != other.srs_rating)
                identical = false;
        }
    }

    std::printf("snapshots  serial %8.1f ms   parallel %8.1f ms   speedup %.2fx   %s\n",
                serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "bit-identical" : "MISMATCH");

    // Kernel-density posterior batch over every snapshot date.
    std::uniform_real_distribution<double> feature(-2.0, 2.0);
    std::vector<LabeledRow> training;
    for (int i = 0; i < 600; ++i) {
        LabeledRow row;
        row.label = i % 2 == 0 ? "home" : "away";
        for (int f = 0; f < 5; ++f)
            row.features.push_back(feature(rng) + (i % 2 == 0 ? 0.4 : -0.4));
        training.push_back(std::move(row));
    }
    NBModel model = nb_train(training, true);
    std::vector<std::vector<double>> queries;
    for (int i = 0; i < 4000; ++i) {
        std::vector<double> q;
        for (int f = 0; f < 5; ++f) q.push_back(feature(rng));
        queries.push_back(std::move(q));
    }

    t0 = std::chrono::steady_clock::now();
    auto nb_serial = nb_predict_batch(model, queries, ExecMode::serial);
    double nb_serial_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    auto nb_parallel = nb_predict_batch(model, queries, ExecMode::parallel);
    double nb_parallel_ms = ms_since(t0);

    bool nb_identical = nb_serial.size() == nb_parallel.size();
    for (std::size_t i = 0; nb_identical && i < nb_serial.size(); ++i)
        if (nb_serial[i].label != nb_parallel[i].label ||
            nb_serial[i].probability != nb_parallel[i].probability)
            nb_identical = false;

    std::printf("kde batch  serial %8.1f ms   parallel %8.1f ms   speedup %.2fx   %s\n",
                nb_serial_ms, nb_parallel_ms, nb_serial_ms / nb_parallel_ms,
                nb_identical ? "bit-identical" : "MISMATCH");

    return identical && nb_identical ? 0 : 1;
}
