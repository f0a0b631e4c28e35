#include "ufodt/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ufodt {

const char* to_string(Criterion c) {
    switch (c) {
        case Criterion::EC2: return "EC2";
        case Criterion::IG: return "IG";
        case Criterion::US: return "US";
        case Criterion::Random: return "RANDOM";
    }
    return "?";
}

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::OneRegion: return "ONE_REGION";
        case StopReason::Exhausted: return "EXHAUSTED";
        case StopReason::NoGain: return "NO_GAIN";
        case StopReason::Empty: return "EMPTY";
        case StopReason::Budget: return "BUDGET";
        case StopReason::Warmup: return "WARMUP";
    }
    return "?";
}

std::optional<Criterion> criterion_from_string(const std::string& s) {
    if (s == "EC2" || s == "ec2") return Criterion::EC2;
    if (s == "IG" || s == "ig") return Criterion::IG;
    if (s == "US" || s == "us") return Criterion::US;
    if (s == "RANDOM" || s == "random") return Criterion::Random;
    return std::nullopt;
}

double ec2_objective(const HypothesisSet& set) {
    if (set.empty()) throw std::invalid_argument("ec2_objective: degenerate (empty) hypothesis set");
    auto census = region_census(set);
    double total = 0.0;
    double sum_sq = 0.0;
    for (const auto& [region, mass] : census) {
        total += mass;
        sum_sq += mass * mass;
    }
    double cross = (total * total - sum_sq) / 2.0;
    return std::max(0.0, cross) * set.scale * set.scale;
}

double ec2_gain(const HypothesisSet& set, std::size_t candidate) {
    if (set.empty()) throw std::invalid_argument("ec2_gain: degenerate (empty) hypothesis set");
    if (std::find(set.conditioned.begin(), set.conditioned.end(), candidate) !=
        set.conditioned.end())
        throw std::invalid_argument("ec2_gain: candidate already observed");

    // per-region masses split by the candidate's outcome
    std::map<std::size_t, double> m_all, m_v[2];
    double p_v[2] = {0.0, 0.0};
    for (std::size_t k = 0; k < set.members.size(); ++k) {
        if (!set.alive[k] || !(set.masses[k] > 0.0)) continue;
        int v = set.members[k].bits[candidate] ? 1 : 0;
        m_all[set.members[k].region] += set.masses[k];
        m_v[v][set.members[k].region] += set.masses[k];
        p_v[v] += set.masses[k];
    }
    auto cross = [](const std::map<std::size_t, double>& masses) {
        double total = 0.0, sum_sq = 0.0;
        for (const auto& [r, m] : masses) {
            total += m;
            sum_sq += m * m;
        }
        return (total * total - sum_sq) / 2.0;
    };
    double before = cross(m_all);
    double expected_after = 0.0;
    for (int v = 0; v < 2; ++v)
        if (p_v[v] > 0.0) expected_after += p_v[v] * cross(m_v[v]);
    double gain = before - expected_after;
    return std::max(0.0, gain) * set.scale * set.scale;
}

double ig_gain(const ThetaTable& theta, const std::vector<double>& label_posterior,
               std::size_t candidate) {
    const std::size_t m = theta.m();
    double h_now = entropy_bits(label_posterior);
    double expected_after = 0.0;
    for (int v = 0; v < 2; ++v) {
        std::vector<double> post(m);
        double pv = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            double th = theta.theta(candidate, j);
            post[j] = label_posterior[j] * (v ? th : 1.0 - th);
            pv += post[j];
        }
        if (!(pv > 0.0)) continue;
        for (double& x : post) x /= pv;
        expected_after += pv * entropy_bits(post);
    }
    return std::max(0.0, h_now - expected_after);
}

double ig_gain(const ThetaTable& theta, const ObservationSet& observations,
               std::size_t candidate) {
    if (observations.contains(candidate))
        throw std::invalid_argument("ig_gain: candidate already observed");
    return ig_gain(theta, class_posterior(theta, observations), candidate);
}

double us_gain(const HypothesisSet& set, std::size_t candidate) {
    if (set.empty()) throw std::invalid_argument("us_gain: degenerate (empty) hypothesis set");
    // conditioning partitions the alive set, so the expected entropy drop
    // equals the entropy of the outcome distribution
    double p_v[2] = {0.0, 0.0};
    for (std::size_t k = 0; k < set.members.size(); ++k) {
        if (!set.alive[k] || !(set.masses[k] > 0.0)) continue;
        p_v[set.members[k].bits[candidate] ? 1 : 0] += set.masses[k];
    }
    double gain = 0.0;
    for (int v = 0; v < 2; ++v)
        if (p_v[v] > 0.0) gain -= p_v[v] * std::log2(p_v[v]);
    return std::max(0.0, gain);
}

std::optional<std::size_t> select_query(const std::vector<GainScore>& scores, Criterion criterion,
                                        Rng& rng) {
    if (scores.empty()) return std::nullopt;
    if (criterion == Criterion::Random) {
        std::uniform_int_distribution<std::size_t> pick(0, scores.size() - 1);
        return scores[pick(rng)].feature;
    }
    std::optional<std::size_t> best;
    double best_ratio = 0.0;
    for (const auto& s : scores) {
        if (!best || s.ratio > best_ratio || (s.ratio == best_ratio && s.feature < *best)) {
            best = s.feature;
            best_ratio = s.ratio;
        }
    }
    if (best_ratio <= kZeroGainTol) return std::nullopt;
    return best;
}

StopDecision should_stop(const HypothesisSet& set, std::size_t remaining_features,
                         double best_gain) {
    if (set.empty()) return {true, StopReason::Empty};
    if (region_census(set).size() <= 1) return {true, StopReason::OneRegion};
    if (remaining_features == 0) return {true, StopReason::Exhausted};
    if (best_gain <= kZeroGainTol) return {true, StopReason::NoGain};
    return {false, StopReason::OneRegion};
}

}  // namespace ufodt
