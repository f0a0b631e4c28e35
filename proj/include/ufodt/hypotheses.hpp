#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "ufodt/belief.hpp"
#include "ufodt/common.hpp"
#include "ufodt/observation.hpp"

namespace ufodt {

// A full realization of every feature value, assigned to the decision
// region (class) for which it is the optimal prediction.
struct Hypothesis {
    std::vector<std::uint8_t> bits;
    std::size_t region = 0;
};

// Sampled hypothesis pool the planner reasons over. Masses over alive
// members are kept normalized; `scale` restores the pre-conditioning
// measure so edge weights stay comparable across conditioning steps.
struct HypothesisSet {
    std::vector<Hypothesis> members;
    std::vector<double> masses;           // normalized over alive members
    std::vector<char> alive;
    std::vector<std::size_t> draw_counts; // how often each pattern was drawn
    std::vector<std::size_t> conditioned; // features already conditioned on
    std::size_t num_classes = 0;
    double scale = 1.0;
    bool empty_flag = false;

    std::size_t size() const { return members.size(); }
    std::size_t alive_count() const;
    bool empty() const { return empty_flag; }
};

// Draw `count` regions from the class prior, then each bit from
// Ber(theta_ij); identical bit patterns collapse. Each surviving pattern
// gets its MAP region (ties to the lowest class) and a mass proportional
// to its marginal probability, renormalized over the sampled set.
HypothesisSet sample_hypotheses(const ThetaTable& theta, std::size_t count, Rng& rng);

// All 2^n patterns with exact normalized marginals; usable for n small
// enough to enumerate.
HypothesisSet enumerate_hypotheses(const ThetaTable& theta);

// Remove members inconsistent with the observation and renormalize the
// survivors. An all-dead result comes back flagged empty rather than as an
// error. Observing the same feature twice is rejected.
HypothesisSet condition(const HypothesisSet& set, Observation observation);

// Alive mass per decision region; only regions with positive mass appear.
std::map<std::size_t, double> region_census(const HypothesisSet& set);

}  // namespace ufodt
