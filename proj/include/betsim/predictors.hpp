#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "betsim/features.hpp"
#include "betsim/ledger.hpp"
#include "betsim/parallel.hpp"

namespace betsim {

struct Prediction {
    std::string match_id;
    std::string pick;
    std::optional<double> win_probability;  // of the picked side, always >= 0.5
};

// Pythagorean exponent and home-court multiplier. Defaults follow common
// published values; both are ordinary configuration.
struct KPParams {
    double pyth_exponent = 11.5;
    double home_advantage = 1.014;  // offense scaled up, defense scaled down at home
};

// adj_oe^x / (adj_oe^x + adj_de^x). Efficiencies must be positive.
double pythagorean_wpct(double adj_oe, double adj_de, double exponent);

// Probability that a team with win fraction p_a beats one with p_b.
// Both must lie strictly inside (0,1).
double log5(double p_a, double p_b);

// Venue is given from team A's perspective. Exact 0.5 ties break toward the
// home team, and toward the alphabetically first team on neutral floors.
Prediction kp_predict(const std::string& team_a, const EfficiencyRating& eff_a,
                      const std::string& team_b, const EfficiencyRating& eff_b, Venue venue_a,
                      const KPParams& params);

// Higher rating (plus home bonus) wins; emits no probability.
Prediction srs_predict(const std::string& team_a, double rating_a, const std::string& team_b,
                       double rating_b, Venue venue_a, double home_bonus);

struct LabeledRow {
    std::string label;
    std::vector<double> features;
};

// Naive Bayes with either a single Gaussian per (class, feature) or an
// equal-weight Gaussian kernel mixture centered on the training values.
class NBModel {
public:
    bool kernel() const { return kernel_; }
    std::size_t feature_count() const { return feature_count_; }
    const std::vector<std::string>& labels() const { return labels_; }

    double log_prior(std::size_t class_index) const { return log_priors_[class_index]; }
    double log_density(std::size_t class_index, std::size_t feature_index, double x) const;

private:
    friend NBModel nb_train(const std::vector<LabeledRow>& rows, bool kernel);

    struct FeatureDensity {
        double mean = 0.0;
        double variance = 1.0;
        std::vector<double> centers;  // kernel mode
        double bandwidth = 0.0;       // kernel mode
    };

    bool kernel_ = false;
    std::size_t feature_count_ = 0;
    std::vector<std::string> labels_;  // sorted
    std::vector<double> log_priors_;
    std::vector<std::vector<FeatureDensity>> densities_;  // [class][feature]
};

NBModel nb_train(const std::vector<LabeledRow>& rows, bool kernel);

struct NBPosterior {
    std::string label;
    double probability;  // normalized posterior of `label`
};

// Argmax class under prior times density product, accumulated in log domain.
NBPosterior nb_predict(const NBModel& model, const std::vector<double>& features);

// Full posterior by class label, for oracle comparisons.
std::map<std::string, double> nb_posteriors(const NBModel& model,
                                            const std::vector<double>& features);

// Rows are independent slots; the parallel flavor matches the serial one bit
// for bit.
std::vector<NBPosterior> nb_predict_batch(const NBModel& model,
                                          const std::vector<std::vector<double>>& rows,
                                          ExecMode mode = ExecMode::parallel);

// Reads "match_id,pick_team[,probability]" rows (header required) for picks
// produced outside the engine. Rejects unknown matches, picks that are not
// participants, and duplicate rows.
std::map<std::string, Prediction> load_external_picks(std::istream& in,
                                                      const std::vector<MatchRecord>& matches);

}  // namespace betsim
