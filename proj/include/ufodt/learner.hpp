#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ufodt/belief.hpp"
#include "ufodt/datastream.hpp"
#include "ufodt/session.hpp"

namespace ufodt {

struct OfsConfig {
    std::size_t budget_b = 1;     // features exposed per step
    double epsilon = 0.2;         // exploration rate
    double learning_rate = 0.1;
};

// Online feature-selection state: per-class linear weights trained on
// unbiased feature estimates, plus the currently exposed subset.
struct OfsState {
    Matrix weights;  // m x n
    double epsilon = 0.2;
    std::size_t budget_b = 1;
    double learning_rate = 0.1;
    std::vector<std::size_t> selected;

    static OfsState init(std::size_t n, std::size_t m, const OfsConfig& cfg);
};

struct LearnerConfig {
    Criterion criterion = Criterion::EC2;
    std::size_t hypothesis_count = 100;
    bool enumerate = false;
    DriftConfig drift;
    std::optional<OfsConfig> feature_selection;
    std::optional<double> budget;
    std::uint64_t seed = 1;
};

struct EpochRecord {
    std::size_t t = 0;
    std::size_t prediction = 0;
    std::size_t truth = 0;
    double cost = 0.0;
    bool correct = false;
    double train_utility = 0.0;
    StopReason stop_reason = StopReason::Exhausted;
    std::size_t queries = 0;
    std::size_t distinct_hypotheses = 0;
    std::vector<std::size_t> queried_features;
    std::vector<std::size_t> ofs_selected;  // exposed subset, when OFS is on
};

struct OnlineResult {
    std::vector<EpochRecord> records;
    BeliefState belief;
    std::optional<OfsState> ofs;
};

// Called after each epoch with the fresh record and the updated belief.
using EpochCallback = std::function<void(const EpochRecord&, const BeliefState&)>;

// The fully online loop over binary-feature streams: sample theta from the
// posterior, plan one query session, predict, reveal the label, update.
OnlineResult run_online(const LearnerConfig& config, const std::vector<DataPoint>& stream,
                        BeliefState initial_belief, const CostModel& costs,
                        const EpochCallback& on_epoch = nullptr);

// Epsilon-greedy subset: top-B features by weight-column L2 norm with
// probability 1-epsilon, otherwise a uniformly random B-subset.
std::vector<std::size_t> ofs_select(const OfsState& state, Rng& rng);

struct OfsEstimate {
    double value = 0.0;
    bool degenerate = false;  // zero denominator
};

// Importance-weighted feature estimate from the queried/selected
// indicators; unbiased over the epsilon-greedy selection randomness.
OfsEstimate ofs_estimate(double x_i, bool queried, bool selected, std::size_t budget_b,
                         std::size_t n, double epsilon);

// Multiclass perceptron step on a mistake; no change otherwise.
void ofs_update(OfsState& state, const std::vector<double>& estimates, std::size_t true_label,
                std::size_t predicted_label);

}  // namespace ufodt
