#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ufodt/acquisition.hpp"
#include "ufodt/belief.hpp"
#include "ufodt/hypotheses.hpp"
#include "ufodt/observation.hpp"

namespace ufodt {

// Answers a feature query with the true binarized value of the current
// data point. Throws DataError when it cannot answer.
using PointOracle = std::function<int(std::size_t feature)>;

struct SessionOptions {
    Criterion criterion = Criterion::EC2;
    std::size_t hypothesis_count = 100;
    bool enumerate = false;            // exact 2^n pool instead of sampling
    std::optional<double> budget;      // max total query cost
    std::optional<std::vector<char>> allowed;  // queryable-feature mask
    std::optional<Matrix> utility;     // m x m u(y_true, y); default 0-1
};

struct SessionResult {
    std::size_t prediction = 0;
    ObservationSet observations;
    StopReason stop_reason = StopReason::Exhausted;
    std::size_t queries_made = 0;
    double utility = 0.0;  // filled in once the true label is revealed
    std::vector<double> gains;        // raw score of each executed query
    std::vector<double> gains_norm;   // same, normalized into [0,1]
    std::size_t distinct_hypotheses = 0;
};

// One planning epoch: sample hypotheses once, then greedily query, observe
// and condition until the stopping rule (or budget) fires. `select_rng`
// only feeds the Random criterion.
SessionResult run_session(const ThetaTable& theta, const PointOracle& oracle,
                          const CostModel& costs, const SessionOptions& options, Rng& hyp_rng,
                          Rng& select_rng);

// MAP label under the naive-Bayes posterior given the observations so far;
// degenerate evidence falls back to the prior. Ties go to the lowest class.
std::size_t predict_fallback(const ThetaTable& theta, const ObservationSet& observations);
std::size_t predict_fallback(const ThetaTable& theta, const ObservationSet& observations,
                             const std::optional<Matrix>& utility);

}  // namespace ufodt
