#include "betsim/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace betsim {

double pythagorean_wpct(double adj_oe, double adj_de, double exponent) {
    if (!(adj_oe > 0.0) || !(adj_de > 0.0))
        throw std::invalid_argument("pythagorean_wpct: efficiencies must be positive");
    if (!(exponent > 0.0))
        throw std::invalid_argument("pythagorean_wpct: exponent must be positive");
    // Ratio form keeps the result stable and scale-invariant.
    const double ratio = std::pow(adj_de / adj_oe, exponent);
    return 1.0 / (1.0 + ratio);
}

double log5(double p_a, double p_b) {
    if (!(p_a > 0.0) || !(p_a < 1.0) || !(p_b > 0.0) || !(p_b < 1.0))
        throw std::invalid_argument("log5: probabilities must lie strictly inside (0,1)");
    const double num = p_a * (1.0 - p_b);
    return num / (num + p_b * (1.0 - p_a));
}

namespace {

std::string tie_break(const std::string& team_a, const std::string& team_b, Venue venue_a) {
    if (venue_a == Venue::home) return team_a;
    if (venue_a == Venue::away) return team_b;
    return std::min(team_a, team_b);
}

}  // namespace

Prediction kp_predict(const std::string& team_a, const EfficiencyRating& eff_a,
                      const std::string& team_b, const EfficiencyRating& eff_b, Venue venue_a,
                      const KPParams& params) {
    if (!(params.home_advantage > 0.0))
        throw std::invalid_argument("kp_predict: home advantage must be positive");
    double oe_a = eff_a.adj_oe, de_a = eff_a.adj_de;
    double oe_b = eff_b.adj_oe, de_b = eff_b.adj_de;
    if (venue_a == Venue::home) {
        oe_a *= params.home_advantage;
        de_a /= params.home_advantage;
    } else if (venue_a == Venue::away) {
        oe_b *= params.home_advantage;
        de_b /= params.home_advantage;
    }
    const double p_a = pythagorean_wpct(oe_a, de_a, params.pyth_exponent);
    const double p_b = pythagorean_wpct(oe_b, de_b, params.pyth_exponent);
    const double p = log5(p_a, p_b);

    Prediction out;
    if (p > 0.5) {
        out.pick = team_a;
        out.win_probability = p;
    } else if (p < 0.5) {
        out.pick = team_b;
        out.win_probability = 1.0 - p;
    } else {
        out.pick = tie_break(team_a, team_b, venue_a);
        out.win_probability = 0.5;
    }
    return out;
}

Prediction srs_predict(const std::string& team_a, double rating_a, const std::string& team_b,
                       double rating_b, Venue venue_a, double home_bonus) {
    double score_a = rating_a + (venue_a == Venue::home ? home_bonus : 0.0);
    double score_b = rating_b + (venue_a == Venue::away ? home_bonus : 0.0);
    Prediction out;
    if (score_a > score_b)
        out.pick = team_a;
    else if (score_b > score_a)
        out.pick = team_b;
    else
        out.pick = tie_break(team_a, team_b, venue_a);
    return out;
}

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

double gaussian_log_density(double x, double mean, double variance) {
    const double d = x - mean;
    return -0.5 * (kLogTwoPi + std::log(variance) + d * d / variance);
}

double log_sum_exp(const std::vector<double>& values) {
    double m = values.front();
    for (double v : values) m = std::max(m, v);
    if (!std::isfinite(m)) return m;
    double sum = 0.0;
    for (double v : values) sum += std::exp(v - m);
    return m + std::log(sum);
}

}  // namespace

double NBModel::log_density(std::size_t class_index, std::size_t feature_index, double x) const {
    const FeatureDensity& d = densities_[class_index][feature_index];
    if (!kernel_) return gaussian_log_density(x, d.mean, d.variance);
    std::vector<double> terms;
    terms.reserve(d.centers.size());
    const double variance = d.bandwidth * d.bandwidth;
    for (double center : d.centers) terms.push_back(gaussian_log_density(x, center, variance));
    return log_sum_exp(terms) - std::log(static_cast<double>(d.centers.size()));
}

NBModel nb_train(const std::vector<LabeledRow>& rows, bool kernel) {
    if (rows.empty()) throw std::invalid_argument("nb_train: no training rows");
    const std::size_t n_features = rows.front().features.size();
    if (n_features == 0) throw std::invalid_argument("nb_train: rows have no features");
    for (const LabeledRow& row : rows)
        if (row.features.size() != n_features)
            throw std::invalid_argument("nb_train: rows disagree on feature count");

    std::set<std::string> labels;
    for (const LabeledRow& row : rows) labels.insert(row.label);
    if (labels.size() < 2)
        throw std::invalid_argument("nb_train: need at least two classes, got " +
                                    std::to_string(labels.size()));

    NBModel model;
    model.kernel_ = kernel;
    model.feature_count_ = n_features;
    model.labels_.assign(labels.begin(), labels.end());

    // Bandwidths and variance floors come from the pooled per-feature range:
    // range over distinct-count for the kernel width, with a relative floor.
    std::vector<double> bandwidth(n_features, 0.0);
    std::vector<double> variance_floor(n_features, 0.0);
    for (std::size_t f = 0; f < n_features; ++f) {
        std::set<double> distinct;
        double lo = rows.front().features[f], hi = lo;
        for (const LabeledRow& row : rows) {
            const double v = row.features[f];
            distinct.insert(v);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double range = hi - lo;
        double bw = range / static_cast<double>(distinct.size());
        bw = std::max(bw, 1e-6 * range);
        if (!(bw > 0.0)) bw = 1e-9;  // constant feature: degenerate but positive
        bandwidth[f] = bw;
        variance_floor[f] = std::max(1e-6 * range * 1e-6 * range, 1e-18);
    }

    for (const std::string& label : model.labels_) {
        std::vector<const LabeledRow*> members;
        for (const LabeledRow& row : rows)
            if (row.label == label) members.push_back(&row);
        model.log_priors_.push_back(std::log(static_cast<double>(members.size()) /
                                             static_cast<double>(rows.size())));
        std::vector<NBModel::FeatureDensity> features(n_features);
        for (std::size_t f = 0; f < n_features; ++f) {
            NBModel::FeatureDensity& d = features[f];
            if (kernel) {
                for (const LabeledRow* row : members) d.centers.push_back(row->features[f]);
                d.bandwidth = bandwidth[f];
            } else {
                double mean = 0.0;
                for (const LabeledRow* row : members) mean += row->features[f];
                mean /= static_cast<double>(members.size());
                double variance = 0.0;
                for (const LabeledRow* row : members) {
                    const double delta = row->features[f] - mean;
                    variance += delta * delta;
                }
                variance /= static_cast<double>(members.size());
                d.mean = mean;
                d.variance = std::max(variance, variance_floor[f]);
            }
        }
        model.densities_.push_back(std::move(features));
    }
    return model;
}

std::map<std::string, double> nb_posteriors(const NBModel& model,
                                            const std::vector<double>& features) {
    if (features.size() != model.feature_count())
        throw std::invalid_argument("nb_predict: expected " +
                                    std::to_string(model.feature_count()) + " features, got " +
                                    std::to_string(features.size()));
    const std::size_t n_classes = model.labels().size();
    std::vector<double> log_joint(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
        double acc = model.log_prior(c);
        for (std::size_t f = 0; f < features.size(); ++f)
            acc += model.log_density(c, f, features[f]);
        log_joint[c] = acc;
    }
    const double norm = log_sum_exp(log_joint);
    std::map<std::string, double> out;
    for (std::size_t c = 0; c < n_classes; ++c)
        out[model.labels()[c]] = std::exp(log_joint[c] - norm);
    return out;
}

NBPosterior nb_predict(const NBModel& model, const std::vector<double>& features) {
    auto posteriors = nb_posteriors(model, features);
    NBPosterior best{posteriors.begin()->first, posteriors.begin()->second};
    for (const auto& [label, probability] : posteriors)
        if (probability > best.probability) best = {label, probability};
    return best;
}

std::vector<NBPosterior> nb_predict_batch(const NBModel& model,
                                          const std::vector<std::vector<double>>& rows,
                                          ExecMode mode) {
    std::vector<NBPosterior> out(rows.size());
    std::exception_ptr error = nullptr;
    if (mode == ExecMode::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long i = 0; i < static_cast<long>(rows.size()); ++i) {
            try {
                out[static_cast<std::size_t>(i)] =
                    nb_predict(model, rows[static_cast<std::size_t>(i)]);
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
    } else {
        for (std::size_t i = 0; i < rows.size(); ++i) out[i] = nb_predict(model, rows[i]);
    }
    return out;
}

std::map<std::string, Prediction> load_external_picks(std::istream& in,
                                                      const std::vector<MatchRecord>& matches) {
    std::map<std::string, const MatchRecord*> by_id;
    for (const MatchRecord& match : matches) by_id[match.match_id] = &match;

    std::map<std::string, Prediction> picks;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!saw_header) {
            if (fields.size() < 2 || fields[0] != "match_id" || fields[1] != "pick_team")
                throw std::invalid_argument(
                    "external picks: expected header 'match_id,pick_team[,probability]'");
            saw_header = true;
            continue;
        }
        if (fields.size() < 2)
            throw std::invalid_argument("external picks line " + std::to_string(line_no) +
                                        ": expected at least match_id and pick_team");
        const std::string& match_id = fields[0];
        const std::string& pick = fields[1];
        auto it = by_id.find(match_id);
        if (it == by_id.end())
            throw std::invalid_argument("external picks line " + std::to_string(line_no) +
                                        ": unknown match '" + match_id + "'");
        const MatchRecord& match = *it->second;
        if (pick != match.home_team && pick != match.away_team)
            throw std::invalid_argument("external picks line " + std::to_string(line_no) + ": '" +
                                        pick + "' is not a participant of " + match_id);
        if (picks.count(match_id))
            throw std::invalid_argument("external picks line " + std::to_string(line_no) +
                                        ": duplicate pick for " + match_id);
        Prediction p;
        p.match_id = match_id;
        p.pick = pick;
        if (fields.size() >= 3 && !fields[2].empty()) {
            double probability = 0.0;
            try {
                probability = std::stod(fields[2]);
            } catch (const std::exception&) {
                throw std::invalid_argument("external picks line " + std::to_string(line_no) +
                                            ": bad probability '" + fields[2] + "'");
            }
            if (!(probability >= 0.5) || !(probability < 1.0))
                throw std::invalid_argument("external picks line " + std::to_string(line_no) +
                                            ": probability must lie in [0.5, 1)");
            p.win_probability = probability;
        }
        picks.emplace(match_id, std::move(p));
    }
    if (!saw_header) throw std::invalid_argument("external picks: empty file (header required)");
    return picks;
}

}  // namespace betsim
