#include "ufodt/session.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ufodt {

namespace {

std::size_t argmax_lowest(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < v.size(); ++j)
        if (v[j] > v[best]) best = j;
    return best;
}

// Exp3 reward scale. EC2 gains are divided by the epoch-start edge weight:
// every query's reward is then the fraction of the epoch's total weight it
// cuts, so late cleanup cuts are not inflated into full rewards.
double normalizer(Criterion criterion, const HypothesisSet& set, std::size_t num_classes,
                  double epoch_total_weight) {
    switch (criterion) {
        case Criterion::EC2:
            return epoch_total_weight;
        case Criterion::IG:
            return std::log2(static_cast<double>(std::max<std::size_t>(2, num_classes)));
        case Criterion::US:
            return std::log2(static_cast<double>(std::max<std::size_t>(2, set.alive_count())));
        case Criterion::Random:
            return 1.0;
    }
    return 1.0;
}

}  // namespace

std::size_t predict_fallback(const ThetaTable& theta, const ObservationSet& observations) {
    return predict_fallback(theta, observations, std::nullopt);
}

std::size_t predict_fallback(const ThetaTable& theta, const ObservationSet& observations,
                             const std::optional<Matrix>& utility) {
    std::vector<double> post;
    try {
        post = class_posterior(theta, observations);
    } catch (const DegenerateEvidenceError&) {
        post = theta.class_prior;
    }
    if (!utility) return argmax_lowest(post);
    // argmax over expected utility when a loss structure is injected
    std::vector<double> expected(theta.m(), 0.0);
    for (std::size_t y = 0; y < theta.m(); ++y)
        for (std::size_t j = 0; j < theta.m(); ++j) expected[y] += post[j] * (*utility)(j, y);
    return argmax_lowest(expected);
}

SessionResult run_session(const ThetaTable& theta, const PointOracle& oracle,
                          const CostModel& costs, const SessionOptions& options, Rng& hyp_rng,
                          Rng& select_rng) {
    const std::size_t n = theta.n();
    if (costs.costs.size() != n) throw std::invalid_argument("run_session: cost vector length mismatch");

    SessionResult result;
    HypothesisSet set = options.enumerate ? enumerate_hypotheses(theta)
                                          : sample_hypotheses(theta, options.hypothesis_count, hyp_rng);
    result.distinct_hypotheses = set.size();
    const double epoch_total_weight = set.empty() ? 0.0 : ec2_objective(set);

    auto queryable = [&](std::size_t i) {
        if (result.observations.contains(i)) return false;
        return !options.allowed || (*options.allowed)[i];
    };

    StopReason reason;
    std::vector<GainScore> scores;
    const double inf = std::numeric_limits<double>::infinity();
    while (true) {
        std::size_t remaining = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (queryable(i)) ++remaining;

        StopDecision stop = should_stop(set, remaining, inf);
        if (stop.stop) {
            reason = stop.reason;
            break;
        }

        scores.clear();
        std::vector<double> label_post;
        if (options.criterion == Criterion::IG) {
            try {
                label_post = class_posterior(theta, result.observations);
            } catch (const DegenerateEvidenceError&) {
                label_post = theta.class_prior;
            }
        }
        // EC2 gains are measured against the session-start weights; rescale
        // into the current branch so the zero-gain tolerance stays relative
        // (the argmax is unchanged)
        const double measure =
            options.criterion == Criterion::EC2 ? set.scale * set.scale : 1.0;
        double best_gain = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!queryable(i)) continue;
            double gain = 0.0;
            switch (options.criterion) {
                case Criterion::EC2: gain = ec2_gain(set, i) / measure; break;
                case Criterion::IG: gain = ig_gain(theta, label_post, i); break;
                case Criterion::US: gain = us_gain(set, i); break;
                case Criterion::Random: gain = 0.0; break;
            }
            scores.push_back({i, gain, gain / costs.cost(i)});
            best_gain = std::max(best_gain, gain);
        }

        // the Random criterion carries no gain signal, so NoGain never fires
        double gain_for_stop = options.criterion == Criterion::Random ? inf : best_gain;
        stop = should_stop(set, remaining, gain_for_stop);
        if (stop.stop) {
            reason = stop.reason;
            break;
        }

        std::optional<std::size_t> pick = select_query(scores, options.criterion, select_rng);
        if (!pick) {
            reason = StopReason::NoGain;
            break;
        }
        if (options.budget &&
            result.observations.total_cost + costs.cost(*pick) > *options.budget) {
            reason = StopReason::Budget;
            break;
        }

        int value = oracle(*pick);
        result.observations.add(*pick, value, costs.cost(*pick));
        double sel_gain = 0.0;
        for (const auto& s : scores)
            if (s.feature == *pick) sel_gain = s.gain;
        double raw_gain = sel_gain * measure;
        double scale = normalizer(options.criterion, set, theta.m(), epoch_total_weight);
        result.gains.push_back(raw_gain);
        result.gains_norm.push_back(scale > 0.0 ? std::clamp(raw_gain / scale, 0.0, 1.0) : 0.0);

        set = condition(set, {*pick, value});
    }

    result.stop_reason = reason;
    result.queries_made = result.observations.size();
    if (reason == StopReason::OneRegion) {
        auto census = region_census(set);
        result.prediction = census.empty() ? predict_fallback(theta, result.observations, options.utility)
                                           : census.begin()->first;
    } else {
        result.prediction = predict_fallback(theta, result.observations, options.utility);
    }
    return result;
}

}  // namespace ufodt
