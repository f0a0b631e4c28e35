#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ufodt/belief.hpp"
#include "ufodt/common.hpp"

namespace ufodt {

struct DataPoint {
    std::vector<double> features;
    std::size_t label = 0;
};

enum class ColumnKind { Binary, Categorical, Real };

// One encoded feature after expansion: binary passthrough, one-hot
// indicator, or a real column handed to the continuous engine.
struct FeatureInfo {
    ColumnKind kind = ColumnKind::Binary;
    std::string source;    // originating column name
    std::string category;  // one-hot value, if any
    std::string name() const { return category.empty() ? source : source + "=" + category; }
};

struct Dataset {
    std::vector<DataPoint> points;
    std::vector<FeatureInfo> features;
    std::vector<std::string> class_names;  // dense indices in first-appearance order
    std::size_t num_classes = 0;
    bool has_real = false;
};

// Comma-separated file with a header row; the last column is the label.
// `schema` is "auto" or a comma list of binary|categorical|real, one entry
// per feature column.
Dataset load_dataset(const std::string& path, const std::string& schema = "auto");
Dataset parse_dataset(const std::string& text, const std::string& schema, const std::string& origin);

// Cost sidecar: one positive real per line, length n after encoding.
CostModel load_cost_file(const std::string& path, std::size_t n);

// Synthetic drift stream over three uniform nominal attributes, one-hot
// encoded to 9 binary features. The active concept switches at each drift
// point, cycling through:
//   1. size=small and color=red
//   2. color=green or shape=circle
//   3. size=medium or size=large
std::vector<DataPoint> stagger_stream(std::size_t length, const std::vector<std::size_t>& drift_points,
                                      Rng& rng);
// Points from one fixed concept (0-based index), for held-out evaluation.
std::vector<DataPoint> stagger_concept_sample(std::size_t concept_index, std::size_t count, Rng& rng);
std::vector<std::string> stagger_feature_names();
std::size_t stagger_concept_at(std::size_t t, const std::vector<std::size_t>& drift_points);

// Noisy seven-segment digit stream (10 classes): 7 display segments whose
// bits flip with the given noise rate, padded with irrelevant uniform bits
// up to `width` features.
std::vector<DataPoint> led_stream(std::size_t length, double noise, std::size_t width, Rng& rng);
ThetaTable led_true_theta(double noise, std::size_t width);

enum class UtilityKind { Accuracy, MacroF };

// Majority class above 60% of labels selects macro F, else accuracy.
UtilityKind choose_utility_kind(const std::vector<DataPoint>& points);

// MAP naive-Bayes prediction of every test point from all its features.
std::size_t map_predict(const ThetaTable& theta, const std::vector<double>& features);
double evaluate_test_theta(const ThetaTable& theta, const std::vector<DataPoint>& test,
                           UtilityKind kind);
// Same, using the posterior-mean table and current class prior.
double evaluate_test(const BeliefState& belief, const std::vector<DataPoint>& test,
                     UtilityKind kind);

// Macro F-measure: per-class 2PR/(P+R) averaged over classes, 0/0 -> 0.
std::vector<double> per_class_f(const Matrix& confusion);
double f_measure(const Matrix& confusion);

struct Metrics {
    struct Epoch {
        std::size_t t = 0;
        double cost = 0.0;
        bool correct = false;
        double train_utility = 0.0;
    };
    std::vector<Epoch> per_epoch;
    std::vector<std::pair<std::size_t, double>> test_curve;
    double cumulative_cost = 0.0;
    std::size_t correct_count = 0;
    Matrix confusion;

    double accuracy() const {
        return per_epoch.empty() ? 0.0
                                 : static_cast<double>(correct_count) /
                                       static_cast<double>(per_epoch.size());
    }
    double macro_f() const { return f_measure(confusion); }
};

void update_metrics(Metrics& metrics, std::size_t t, double cost, std::size_t truth,
                    std::size_t prediction, double train_utility, std::size_t num_classes);

}  // namespace ufodt
