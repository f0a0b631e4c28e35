#include "ufodt/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ufodt {

namespace {

std::size_t map_region(const ThetaTable& theta, const std::vector<std::uint8_t>& bits) {
    const std::size_t m = theta.m();
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        double score = std::log(theta.class_prior[j]);
        for (std::size_t i = 0; i < bits.size(); ++i) {
            double th = theta.theta(i, j);
            score += std::log(bits[i] ? th : 1.0 - th);
        }
        if (score > best_score) {
            best_score = score;
            best = j;
        }
    }
    return best;
}

// Normalize log-masses with max-subtraction. Returns false when every
// pattern has zero probability.
bool assign_masses(HypothesisSet& set, const std::vector<double>& log_masses) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double lm : log_masses) mx = std::max(mx, lm);
    set.masses.assign(log_masses.size(), 0.0);
    if (!(mx > -std::numeric_limits<double>::infinity())) return false;
    double total = 0.0;
    for (std::size_t k = 0; k < log_masses.size(); ++k) {
        set.masses[k] = std::exp(log_masses[k] - mx);
        total += set.masses[k];
    }
    if (!(total > 0.0)) return false;
    for (double& v : set.masses) v /= total;
    return true;
}

}  // namespace

std::size_t HypothesisSet::alive_count() const {
    std::size_t c = 0;
    for (char a : alive)
        if (a) ++c;
    return c;
}

HypothesisSet sample_hypotheses(const ThetaTable& theta, std::size_t count, Rng& rng) {
    if (count < 1) throw std::invalid_argument("sample_hypotheses: count must be >= 1");
    const std::size_t n = theta.n();

    HypothesisSet set;
    set.num_classes = theta.m();
    std::map<std::vector<std::uint8_t>, std::size_t> index_of;
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<std::uint8_t> bits(n);
    for (std::size_t draw = 0; draw < count; ++draw) {
        std::size_t region = sample_index(rng, theta.class_prior);
        for (std::size_t i = 0; i < n; ++i)
            bits[i] = unif(rng) < theta.theta(i, region) ? 1 : 0;
        auto it = index_of.find(bits);
        if (it == index_of.end()) {
            index_of.emplace(bits, set.members.size());
            set.members.push_back({bits, 0});
            set.draw_counts.push_back(1);
        } else {
            ++set.draw_counts[it->second];
        }
    }

    std::vector<double> log_masses(set.members.size());
    for (std::size_t k = 0; k < set.members.size(); ++k) {
        set.members[k].region = map_region(theta, set.members[k].bits);
        log_masses[k] = log_hypothesis_marginal(theta, set.members[k].bits);
    }
    set.alive.assign(set.members.size(), 1);
    set.empty_flag = !assign_masses(set, log_masses);
    return set;
}

HypothesisSet enumerate_hypotheses(const ThetaTable& theta) {
    const std::size_t n = theta.n();
    if (n > 24) throw std::invalid_argument("enumerate_hypotheses: feature space too large");

    HypothesisSet set;
    set.num_classes = theta.m();
    const std::size_t total = std::size_t{1} << n;
    std::vector<double> log_masses(total);
    set.members.resize(total);
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::uint8_t> bits(n);
        for (std::size_t i = 0; i < n; ++i) bits[i] = (code >> i) & 1;
        set.members[code].bits = bits;
        set.members[code].region = map_region(theta, bits);
        log_masses[code] = log_hypothesis_marginal(theta, bits);
    }
    set.alive.assign(total, 1);
    set.draw_counts.assign(total, 1);
    set.empty_flag = !assign_masses(set, log_masses);
    return set;
}

HypothesisSet condition(const HypothesisSet& set, Observation observation) {
    if (std::find(set.conditioned.begin(), set.conditioned.end(), observation.feature) !=
        set.conditioned.end())
        throw std::invalid_argument("condition: feature already observed");
    HypothesisSet out = set;
    out.conditioned.push_back(observation.feature);
    if (out.empty_flag) return out;

    double surviving = 0.0;
    for (std::size_t k = 0; k < out.members.size(); ++k) {
        if (!out.alive[k]) continue;
        if (observation.feature >= out.members[k].bits.size())
            throw std::out_of_range("condition: feature index out of range");
        if (out.members[k].bits[observation.feature] != (observation.value != 0 ? 1 : 0)) {
            out.alive[k] = 0;
            out.masses[k] = 0.0;
        } else {
            surviving += out.masses[k];
        }
    }
    if (!(surviving > 0.0)) {
        out.empty_flag = true;
        out.scale = 0.0;
        for (double& v : out.masses) v = 0.0;
        return out;
    }
    for (std::size_t k = 0; k < out.members.size(); ++k)
        if (out.alive[k]) out.masses[k] /= surviving;
    out.scale *= surviving;
    return out;
}

std::map<std::size_t, double> region_census(const HypothesisSet& set) {
    std::map<std::size_t, double> census;
    for (std::size_t k = 0; k < set.members.size(); ++k) {
        if (!set.alive[k] || !(set.masses[k] > 0.0)) continue;
        census[set.members[k].region] += set.masses[k];
    }
    return census;
}

}  // namespace ufodt
