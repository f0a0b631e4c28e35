#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ufodt/belief.hpp"
#include "ufodt/hypotheses.hpp"
#include "ufodt/observation.hpp"

namespace ufodt {

// Gains at or below this are treated as "no informative feature left"
// rather than floating-point residue.
inline constexpr double kZeroGainTol = 1e-12;

enum class Criterion { EC2, IG, US, Random };

enum class StopReason { OneRegion, Exhausted, NoGain, Empty, Budget, Warmup };

const char* to_string(Criterion c);
const char* to_string(StopReason r);
std::optional<Criterion> criterion_from_string(const std::string& s);

struct GainScore {
    std::size_t feature = 0;
    double gain = 0.0;
    double ratio = 0.0;  // gain / cost
};

// Total remaining edge weight between decision regions: edges connect
// hypotheses in different regions, each weighted by the product of their
// probabilities. Computed from region masses in O(m^2) after an O(|H|)
// census; identical to the pairwise sum because weights factor.
double ec2_objective(const HypothesisSet& set);

// Expected weight of the edges cut by querying `candidate`, over its
// predictive outcome distribution.
double ec2_gain(const HypothesisSet& set, std::size_t candidate);

// Expected reduction of label entropy (bits).
double ig_gain(const ThetaTable& theta, const ObservationSet& observations, std::size_t candidate);
double ig_gain(const ThetaTable& theta, const std::vector<double>& label_posterior,
               std::size_t candidate);

// Expected reduction of entropy over the alive hypotheses (bits).
double us_gain(const HypothesisSet& set, std::size_t candidate);

// Greedy choice: argmax gain/cost ratio, ties to the lowest feature index;
// Random picks uniformly among the candidates. Returns nullopt when every
// ratio is within the zero-gain tolerance.
std::optional<std::size_t> select_query(const std::vector<GainScore>& scores, Criterion criterion,
                                        Rng& rng);

struct StopDecision {
    bool stop = false;
    StopReason reason = StopReason::OneRegion;
};

StopDecision should_stop(const HypothesisSet& set, std::size_t remaining_features,
                         double best_gain);

}  // namespace ufodt
