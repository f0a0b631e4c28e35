// Definition-level brute-force oracles, kept independent of the library's
// computation paths: objectives are explicit sums over hypothesis pairs and
// outcome branches, never region-mass shortcuts.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ufodt/acquisition.hpp"
#include "ufodt/hypotheses.hpp"

namespace oracle {

using ufodt::HypothesisSet;

// Build a set directly from parallel arrays; masses are normalized here.
inline HypothesisSet make_set(const std::vector<std::vector<std::uint8_t>>& bits,
                              const std::vector<std::size_t>& regions,
                              std::vector<double> masses, std::size_t num_classes) {
    HypothesisSet set;
    set.num_classes = num_classes;
    double total = 0.0;
    for (double m : masses) total += m;
    for (double& m : masses) m /= total;
    for (std::size_t k = 0; k < bits.size(); ++k) set.members.push_back({bits[k], regions[k]});
    set.masses = masses;
    set.alive.assign(bits.size(), 1);
    set.draw_counts.assign(bits.size(), 1);
    return set;
}

// Remaining cross-region edge weight by explicit pair enumeration, in the
// original measure (stored mass times the set's scale).
inline double ec2_objective(const HypothesisSet& set) {
    double total = 0.0;
    for (std::size_t a = 0; a < set.members.size(); ++a) {
        if (!set.alive[a]) continue;
        for (std::size_t b = a + 1; b < set.members.size(); ++b) {
            if (!set.alive[b]) continue;
            if (set.members[a].region == set.members[b].region) continue;
            total += (set.masses[a] * set.scale) * (set.masses[b] * set.scale);
        }
    }
    return total;
}

inline double ec2_gain(const HypothesisSet& set, std::size_t candidate) {
    double before = oracle::ec2_objective(set);
    double gain = 0.0;
    for (int v = 0; v < 2; ++v) {
        HypothesisSet branch = set;  // filter without renormalizing
        double pv = 0.0;
        for (std::size_t k = 0; k < branch.members.size(); ++k) {
            if (!branch.alive[k]) continue;
            if (branch.members[k].bits[candidate] != static_cast<std::uint8_t>(v))
                branch.alive[k] = 0;
            else
                pv += set.masses[k];
        }
        if (pv <= 0.0) continue;
        gain += pv * (before - oracle::ec2_objective(branch));
    }
    return gain;
}

inline double entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

// Entropy over alive hypotheses before and after conditioning on each
// outcome, each branch renormalized.
inline double us_gain(const HypothesisSet& set, std::size_t candidate) {
    std::vector<double> now;
    for (std::size_t k = 0; k < set.members.size(); ++k)
        if (set.alive[k] && set.masses[k] > 0.0) now.push_back(set.masses[k]);
    double h_now = entropy(now);
    double expected = 0.0;
    for (int v = 0; v < 2; ++v) {
        std::vector<double> branch;
        double pv = 0.0;
        for (std::size_t k = 0; k < set.members.size(); ++k) {
            if (!set.alive[k] || !(set.masses[k] > 0.0)) continue;
            if (set.members[k].bits[candidate] == static_cast<std::uint8_t>(v)) {
                branch.push_back(set.masses[k]);
                pv += set.masses[k];
            }
        }
        if (pv <= 0.0) continue;
        for (double& m : branch) m /= pv;
        expected += pv * entropy(branch);
    }
    return h_now - expected;
}

// Bayes posterior over labels from explicit products (no log space).
inline std::vector<double> label_posterior(const ufodt::ThetaTable& theta,
                                           const std::vector<std::pair<std::size_t, int>>& obs) {
    std::vector<double> post(theta.m());
    double total = 0.0;
    for (std::size_t j = 0; j < theta.m(); ++j) {
        double p = theta.class_prior[j];
        for (const auto& [i, v] : obs) p *= v ? theta.theta(i, j) : 1.0 - theta.theta(i, j);
        post[j] = p;
        total += p;
    }
    for (double& p : post) p /= total;
    return post;
}

inline double ig_gain(const ufodt::ThetaTable& theta,
                      const std::vector<std::pair<std::size_t, int>>& obs, std::size_t candidate) {
    std::vector<double> post = label_posterior(theta, obs);
    double h_now = entropy(post);
    double expected = 0.0;
    for (int v = 0; v < 2; ++v) {
        double pv = 0.0;
        for (std::size_t j = 0; j < theta.m(); ++j)
            pv += post[j] * (v ? theta.theta(candidate, j) : 1.0 - theta.theta(candidate, j));
        if (pv <= 0.0) continue;
        auto extended = obs;
        extended.emplace_back(candidate, v);
        expected += pv * entropy(label_posterior(theta, extended));
    }
    return h_now - expected;
}

// Random planning instances for fuzzing.
struct RandomInstance {
    HypothesisSet set;
    std::size_t n = 0;
};

inline RandomInstance random_instance(ufodt::Rng& rng, std::size_t max_n, std::size_t max_h,
                                      std::size_t num_classes) {
    std::uniform_int_distribution<std::size_t> n_pick(1, max_n);
    const std::size_t n = n_pick(rng);
    std::uniform_int_distribution<std::size_t> h_pick(2, max_h);
    const std::size_t want = h_pick(rng);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    std::uniform_int_distribution<std::size_t> region_pick(0, num_classes - 1);
    std::uniform_int_distribution<int> bit(0, 1);

    std::vector<std::vector<std::uint8_t>> bits;
    std::vector<std::size_t> regions;
    std::vector<double> masses;
    for (std::size_t k = 0; k < want; ++k) {
        std::vector<std::uint8_t> b(n);
        for (auto& x : b) x = static_cast<std::uint8_t>(bit(rng));
        if (std::find(bits.begin(), bits.end(), b) != bits.end()) continue;
        bits.push_back(b);
        regions.push_back(region_pick(rng));
        masses.push_back(unif(rng));
    }
    RandomInstance inst;
    inst.n = n;
    inst.set = make_set(bits, regions, masses, num_classes);
    return inst;
}

}  // namespace oracle
