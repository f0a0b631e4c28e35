#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ufodt/learner.hpp"

namespace ufodt {

// Per-feature binarization cut points, strictly increasing. Features whose
// calibration values are constant collapse to a single threshold.
struct ThresholdGrid {
    std::vector<std::vector<double>> thresholds;

    std::size_t features() const { return thresholds.size(); }
    std::size_t size(std::size_t feature) const { return thresholds[feature].size(); }
    double tau(std::size_t feature, std::size_t k) const { return thresholds[feature][k]; }
};

// Beta posteriors over the latent per-threshold binary variables, plus the
// per-label usage counts that weight threshold aggregation.
struct LatentBelief {
    Matrix alpha;  // total_slots x m
    Matrix beta;
    Matrix usage;
    std::vector<std::size_t> offsets;  // feature -> first slot; length n+1
    std::vector<double> class_counts;

    static LatentBelief uniform(const ThresholdGrid& grid, std::size_t m);

    std::size_t features() const { return offsets.size() - 1; }
    std::size_t slots() const { return alpha.rows(); }
    std::size_t num_classes() const { return alpha.cols(); }
    std::size_t slot(std::size_t feature, std::size_t k) const { return offsets[feature] + k; }
    std::size_t thresholds(std::size_t feature) const {
        return offsets[feature + 1] - offsets[feature];
    }
};

// Adversarial-bandit state for threshold learning: per-feature sums of
// importance-weighted gains.
struct ThresholdBandit {
    std::vector<std::vector<double>> gain_sums;
    double eta = 0.01;

    static ThresholdBandit init(const ThresholdGrid& grid, double eta);
};

// Thresholds at the (1..K)/(K+1) empirical quantiles (linear
// interpolation); duplicate quantiles collapse so the grid stays strictly
// increasing.
ThresholdGrid build_threshold_grid(const std::vector<std::vector<double>>& warmup_values,
                                   std::size_t k);

inline int binarize(double x, double tau) { return x >= tau ? 1 : 0; }

// Softmax of eta * gain_sums with max-subtraction.
std::vector<double> exp3_distribution(std::span<const double> gain_sums, double eta);

// Importance-weighted update: only the sampled arm's sum moves, by
// gain / pi_k.
void exp3_update(ThresholdBandit& bandit, std::size_t feature, std::size_t sampled_k, double pi_k,
                 double gain);

// Argmax with lowest-index tie-break.
std::size_t select_threshold_exhaustive(std::span<const double> gains);

// Usage-weighted average of the per-threshold posterior means (+1
// smoothing so untouched thresholds still contribute).
double aggregate_theta(const LatentBelief& latent, std::size_t feature, std::size_t cls);

struct ContinuousConfig {
    enum class Mode { Exhaustive, Exp3 };
    std::size_t thresholds = 5;  // K
    double eta = 0.01;
    Mode mode = Mode::Exp3;
    std::size_t warmup = 30;  // stream points used to calibrate the grid
    std::optional<ThresholdGrid> grid;  // explicit grid skips calibration
};

struct ContinuousState {
    std::optional<ThresholdGrid> grid;
    std::optional<LatentBelief> latent;
    ThresholdBandit bandit;
    std::vector<double> class_counts;
};

struct ContinuousResult {
    std::vector<EpochRecord> records;
    ContinuousState state;
};

using ContinuousEpochCallback = std::function<void(const EpochRecord&, const ContinuousState&)>;

// Real-valued feature access for the current data point.
using RealOracle = std::function<double(std::size_t feature)>;

// Sample every per-threshold parameter from its Beta posterior; rows are
// slots.
ThetaTable sample_slot_theta(const LatentBelief& latent, Rng& rng);

// One planning epoch over the full (feature, threshold) slot space: each
// candidate feature is scored at its best threshold, queries condition only
// the chosen threshold's bit. `chosen_k` reports the threshold used per
// queried feature.
SessionResult run_session_exhaustive(const ThetaTable& slot_theta, const LatentBelief& layout,
                                     const ThresholdGrid& grid, const RealOracle& oracle,
                                     const CostModel& costs, const SessionOptions& options,
                                     Rng& hyp_rng, Rng& select_rng,
                                     std::vector<std::size_t>& chosen_k);

// The online loop for real-valued streams. The first `warmup` epochs only
// calibrate the threshold grid (predicting from the class prior at zero
// cost); afterwards each epoch samples thresholds (Exp3 mode) or searches
// them exhaustively, runs a session, and updates the latent posteriors of
// the (feature, threshold) pairs actually queried.
ContinuousResult run_online_continuous(const LearnerConfig& config, const ContinuousConfig& cont,
                                       const std::vector<DataPoint>& stream,
                                       std::size_t num_classes, const CostModel& costs,
                                       const ContinuousEpochCallback& on_epoch = nullptr);

// MAP prediction for a raw point: per-feature likelihoods are
// usage-weighted mixtures over that feature's thresholds. Before the grid
// exists, predictions fall back to the class prior.
std::size_t continuous_map_predict(const ContinuousState& state,
                                   const std::vector<double>& features);
double continuous_test_utility(const ContinuousState& state, const std::vector<DataPoint>& test,
                               UtilityKind kind);

}  // namespace ufodt
