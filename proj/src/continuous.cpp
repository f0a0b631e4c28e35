#include "ufodt/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ufodt {

namespace {

enum StreamId : std::uint64_t { kTheta = 1, kHypotheses = 2, kSelect = 3, kExp3 = 4, kOfs = 5 };

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::size_t argmax_lowest(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < v.size(); ++j)
        if (v[j] > v[best]) best = j;
    return best;
}

}  // namespace

LatentBelief LatentBelief::uniform(const ThresholdGrid& grid, std::size_t m) {
    LatentBelief b;
    b.offsets.resize(grid.features() + 1, 0);
    for (std::size_t i = 0; i < grid.features(); ++i)
        b.offsets[i + 1] = b.offsets[i] + grid.size(i);
    const std::size_t total = b.offsets.back();
    b.alpha = Matrix(total, m, 1.0);
    b.beta = Matrix(total, m, 1.0);
    b.usage = Matrix(total, m, 0.0);
    b.class_counts.assign(m, 1.0);
    return b;
}

ThresholdBandit ThresholdBandit::init(const ThresholdGrid& grid, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("ThresholdBandit: eta must be positive");
    ThresholdBandit b;
    b.eta = eta;
    b.gain_sums.resize(grid.features());
    for (std::size_t i = 0; i < grid.features(); ++i) b.gain_sums[i].assign(grid.size(i), 0.0);
    return b;
}

ThresholdGrid build_threshold_grid(const std::vector<std::vector<double>>& warmup_values,
                                   std::size_t k) {
    if (k < 1) throw std::invalid_argument("build_threshold_grid: K must be >= 1");
    ThresholdGrid grid;
    grid.thresholds.resize(warmup_values.size());
    for (std::size_t i = 0; i < warmup_values.size(); ++i) {
        if (warmup_values[i].empty())
            throw std::invalid_argument("build_threshold_grid: empty warmup for feature " +
                                        std::to_string(i));
        std::vector<double> sorted = warmup_values[i];
        std::sort(sorted.begin(), sorted.end());
        std::vector<double>& taus = grid.thresholds[i];
        for (std::size_t j = 1; j <= k; ++j) {
            double tau = quantile(sorted, static_cast<double>(j) / static_cast<double>(k + 1));
            if (taus.empty() || tau > taus.back()) taus.push_back(tau);
        }
        if (taus.empty()) taus.push_back(sorted.front());
    }
    return grid;
}

std::vector<double> exp3_distribution(std::span<const double> gain_sums, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("exp3_distribution: eta must be positive");
    double mx = -std::numeric_limits<double>::infinity();
    for (double s : gain_sums) mx = std::max(mx, eta * s);
    std::vector<double> pi(gain_sums.size());
    double total = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        pi[i] = std::exp(eta * gain_sums[i] - mx);
        total += pi[i];
    }
    for (double& p : pi) p /= total;
    return pi;
}

void exp3_update(ThresholdBandit& bandit, std::size_t feature, std::size_t sampled_k, double pi_k,
                 double gain) {
    if (!(pi_k > 0.0)) throw std::invalid_argument("exp3_update: pi_k must be positive");
    gain = std::clamp(gain, 0.0, 1.0);
    bandit.gain_sums.at(feature).at(sampled_k) += gain / pi_k;
}

std::size_t select_threshold_exhaustive(std::span<const double> gains) {
    if (gains.empty()) throw std::invalid_argument("select_threshold_exhaustive: no gains");
    std::size_t best = 0;
    for (std::size_t k = 1; k < gains.size(); ++k)
        if (gains[k] > gains[best]) best = k;
    return best;
}

namespace {

// Usage-weighted mixture over a feature's thresholds, evaluated either at
// a concrete value's bits or with every bit forced to 1.
double weighted_likelihood(const LatentBelief& latent, const ThresholdGrid* grid,
                           std::size_t feature, std::size_t cls, const double* value) {
    const std::size_t K = latent.thresholds(feature);
    double weight_total = 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const std::size_t s = latent.slot(feature, k);
        const double w = latent.usage(s, cls) + 1.0;
        const double mean = latent.alpha(s, cls) / (latent.alpha(s, cls) + latent.beta(s, cls));
        int bit = value ? binarize(*value, grid->tau(feature, k)) : 1;
        acc += w * (bit ? mean : 1.0 - mean);
        weight_total += w;
    }
    return acc / weight_total;
}

}  // namespace

double aggregate_theta(const LatentBelief& latent, std::size_t feature, std::size_t cls) {
    return weighted_likelihood(latent, nullptr, feature, cls, nullptr);
}

ThetaTable sample_slot_theta(const LatentBelief& latent, Rng& rng) {
    ThetaTable t;
    t.theta = Matrix(latent.slots(), latent.num_classes());
    for (std::size_t s = 0; s < latent.slots(); ++s)
        for (std::size_t j = 0; j < latent.num_classes(); ++j)
            t.theta(s, j) = beta_sample(rng, latent.alpha(s, j), latent.beta(s, j));
    double total = 0.0;
    for (double c : latent.class_counts) total += c;
    t.class_prior.resize(latent.num_classes());
    for (std::size_t j = 0; j < latent.num_classes(); ++j)
        t.class_prior[j] = latent.class_counts[j] / total;
    return t;
}

SessionResult run_session_exhaustive(const ThetaTable& slot_theta, const LatentBelief& layout,
                                     const ThresholdGrid& grid, const RealOracle& oracle,
                                     const CostModel& costs, const SessionOptions& options,
                                     Rng& hyp_rng, Rng& select_rng,
                                     std::vector<std::size_t>& chosen_k) {
    const std::size_t n = layout.features();
    chosen_k.assign(n, 0);

    SessionResult result;
    HypothesisSet set = options.enumerate
                            ? enumerate_hypotheses(slot_theta)
                            : sample_hypotheses(slot_theta, options.hypothesis_count, hyp_rng);
    result.distinct_hypotheses = set.size();
    const double epoch_total_weight = set.empty() ? 0.0 : ec2_objective(set);

    ObservationSet slot_obs;  // planner-side record over slots
    auto queryable = [&](std::size_t i) {
        if (result.observations.contains(i)) return false;
        return !options.allowed || (*options.allowed)[i];
    };

    StopReason reason;
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

        std::vector<double> label_post;
        if (options.criterion == Criterion::IG) {
            try {
                label_post = class_posterior(slot_theta, slot_obs);
            } catch (const DegenerateEvidenceError&) {
                label_post = slot_theta.class_prior;
            }
        }

        // best threshold per candidate feature, then greedy over features;
        // EC2 gains rescaled into the current branch measure as in run_session
        const double measure =
            options.criterion == Criterion::EC2 ? set.scale * set.scale : 1.0;
        std::vector<GainScore> scores;
        std::vector<std::size_t> best_k(n, 0);
        double best_gain = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!queryable(i)) continue;
            std::vector<double> gains(layout.thresholds(i), 0.0);
            for (std::size_t k = 0; k < gains.size(); ++k) {
                const std::size_t s = layout.slot(i, k);
                switch (options.criterion) {
                    case Criterion::EC2: gains[k] = ec2_gain(set, s) / measure; break;
                    case Criterion::IG: gains[k] = ig_gain(slot_theta, label_post, s); break;
                    case Criterion::US: gains[k] = us_gain(set, s); break;
                    case Criterion::Random: gains[k] = 0.0; break;
                }
            }
            best_k[i] = select_threshold_exhaustive(gains);
            scores.push_back({i, gains[best_k[i]], gains[best_k[i]] / costs.cost(i)});
            best_gain = std::max(best_gain, gains[best_k[i]]);
        }

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
        if (options.criterion == Criterion::Random) {
            std::uniform_int_distribution<std::size_t> th(0, layout.thresholds(*pick) - 1);
            best_k[*pick] = th(select_rng);
        }
        if (options.budget &&
            result.observations.total_cost + costs.cost(*pick) > *options.budget) {
            reason = StopReason::Budget;
            break;
        }

        const std::size_t k = best_k[*pick];
        const std::size_t s = layout.slot(*pick, k);
        const double x = oracle(*pick);
        const int bit = binarize(x, grid.tau(*pick, k));
        chosen_k[*pick] = k;
        result.observations.add(*pick, bit, costs.cost(*pick));
        slot_obs.add(s, bit, costs.cost(*pick));

        double sel_gain = 0.0;
        for (const auto& sc : scores)
            if (sc.feature == *pick) sel_gain = sc.gain;
        double raw_gain = sel_gain * measure;
        double scale = 1.0;
        switch (options.criterion) {
            case Criterion::EC2: scale = epoch_total_weight; break;
            case Criterion::IG:
                scale = std::log2(static_cast<double>(std::max<std::size_t>(2, slot_theta.m())));
                break;
            case Criterion::US:
                scale = std::log2(static_cast<double>(std::max<std::size_t>(2, set.alive_count())));
                break;
            case Criterion::Random: scale = 1.0; break;
        }
        result.gains.push_back(raw_gain);
        result.gains_norm.push_back(scale > 0.0 ? std::clamp(raw_gain / scale, 0.0, 1.0) : 0.0);

        set = condition(set, {s, bit});
    }

    result.stop_reason = reason;
    result.queries_made = result.observations.size();
    if (reason == StopReason::OneRegion) {
        auto census = region_census(set);
        result.prediction =
            census.empty() ? predict_fallback(slot_theta, slot_obs, options.utility)
                           : census.begin()->first;
    } else {
        result.prediction = predict_fallback(slot_theta, slot_obs, options.utility);
    }
    return result;
}

std::size_t continuous_map_predict(const ContinuousState& state,
                                   const std::vector<double>& features) {
    const std::size_t m = state.class_counts.size();
    std::vector<double> score(m);
    double total = 0.0;
    for (double c : state.class_counts) total += c;
    for (std::size_t j = 0; j < m; ++j) score[j] = std::log(state.class_counts[j] / total);
    if (state.latent && state.grid) {
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < state.latent->features(); ++i)
                score[j] += std::log(
                    weighted_likelihood(*state.latent, &*state.grid, i, j, &features[i]));
    }
    return argmax_lowest(score);
}

double continuous_test_utility(const ContinuousState& state, const std::vector<DataPoint>& test,
                               UtilityKind kind) {
    if (test.empty()) throw std::invalid_argument("continuous_test_utility: empty test set");
    const std::size_t m = state.class_counts.size();
    Matrix confusion(m, m, 0.0);
    std::size_t correct = 0;
    for (const auto& p : test) {
        std::size_t pred = continuous_map_predict(state, p.features);
        confusion(p.label, pred) += 1.0;
        if (pred == p.label) ++correct;
    }
    if (kind == UtilityKind::Accuracy)
        return static_cast<double>(correct) / static_cast<double>(test.size());
    return f_measure(confusion);
}

ContinuousResult run_online_continuous(const LearnerConfig& config, const ContinuousConfig& cont,
                                       const std::vector<DataPoint>& stream,
                                       std::size_t num_classes, const CostModel& costs,
                                       const ContinuousEpochCallback& on_epoch) {
    if (stream.empty()) {
        ContinuousResult r;
        r.state.class_counts.assign(num_classes, 1.0);
        return r;
    }
    const std::size_t n = stream.front().features.size();
    const std::size_t m = num_classes;

    Rng theta_rng = seeded_rng(config.seed, kTheta);
    Rng hyp_rng = seeded_rng(config.seed, kHypotheses);
    Rng select_rng = seeded_rng(config.seed, kSelect);
    Rng exp3_rng = seeded_rng(config.seed, kExp3);
    Rng ofs_rng = seeded_rng(config.seed, kOfs);

    ContinuousResult out;
    ContinuousState& state = out.state;
    state.class_counts.assign(m, 1.0);

    std::optional<OfsState> ofs;
    if (config.feature_selection) ofs = OfsState::init(n, m, *config.feature_selection);

    std::size_t warmup = cont.warmup;
    if (cont.grid) {
        state.grid = *cont.grid;
        warmup = 0;
    }
    warmup = std::min(warmup, stream.size());
    std::vector<std::vector<double>> warmup_values(n);

    auto init_model = [&]() {
        state.latent = LatentBelief::uniform(*state.grid, m);
        state.latent->class_counts = state.class_counts;
        state.bandit = ThresholdBandit::init(*state.grid, cont.eta);
    };
    if (state.grid) init_model();

    SessionOptions opts;
    opts.criterion = config.criterion;
    opts.hypothesis_count = config.hypothesis_count;
    opts.enumerate = config.enumerate;
    opts.budget = config.budget;

    for (std::size_t t = 0; t < stream.size(); ++t) {
        const DataPoint& point = stream[t];
        if (point.features.size() != n || point.label >= m)
            throw DataError("run_online_continuous: stream point does not match dimensions");

        EpochRecord rec;
        rec.t = t;
        rec.truth = point.label;

        if (t < warmup) {
            rec.prediction = argmax_lowest(state.class_counts);
            rec.stop_reason = StopReason::Warmup;
            rec.correct = rec.prediction == point.label;
            rec.train_utility = rec.correct ? 1.0 : 0.0;
            for (std::size_t i = 0; i < n; ++i) warmup_values[i].push_back(point.features[i]);
            state.class_counts[point.label] += 1.0;
            out.records.push_back(rec);
            if (on_epoch) on_epoch(rec, state);
            if (t + 1 == warmup) {
                state.grid = build_threshold_grid(warmup_values, cont.thresholds);
                init_model();
            }
            continue;
        }

        LatentBelief& latent = *state.latent;
        ThetaTable slot_theta = sample_slot_theta(latent, theta_rng);

        if (ofs) {
            ofs->selected = ofs_select(*ofs, ofs_rng);
            std::vector<char> mask(n, 0);
            for (std::size_t i : ofs->selected) mask[i] = 1;
            opts.allowed = mask;
        }

        SessionResult session;
        std::vector<std::size_t> used_k(n, 0);
        std::vector<std::vector<double>> pi(n);
        if (cont.mode == ContinuousConfig::Mode::Exp3) {
            // thresholds sampled once per feature at the start of the epoch
            ThetaTable epoch_theta;
            epoch_theta.theta = Matrix(n, m);
            epoch_theta.class_prior = slot_theta.class_prior;
            for (std::size_t i = 0; i < n; ++i) {
                pi[i] = exp3_distribution(state.bandit.gain_sums[i], cont.eta);
                used_k[i] = sample_index(exp3_rng, pi[i]);
                for (std::size_t j = 0; j < m; ++j)
                    epoch_theta.theta(i, j) = slot_theta.theta(latent.slot(i, used_k[i]), j);
            }
            PointOracle bit_oracle = [&](std::size_t i) {
                if (i >= point.features.size()) throw DataError("oracle: feature index out of range");
                return binarize(point.features[i], state.grid->tau(i, used_k[i]));
            };
            session = run_session(epoch_theta, bit_oracle, costs, opts, hyp_rng, select_rng);
            for (std::size_t q = 0; q < session.observations.entries.size(); ++q) {
                const std::size_t i = session.observations.entries[q].feature;
                exp3_update(state.bandit, i, used_k[i], pi[i][used_k[i]], session.gains_norm[q]);
            }
        } else {
            RealOracle oracle = [&](std::size_t i) {
                if (i >= point.features.size()) throw DataError("oracle: feature index out of range");
                return point.features[i];
            };
            session = run_session_exhaustive(slot_theta, latent, *state.grid, oracle, costs, opts,
                                             hyp_rng, select_rng, used_k);
        }

        // label revealed only now
        session.utility = session.prediction == point.label ? 1.0 : 0.0;
        if (config.drift.enabled) {
            const double g = config.drift.gamma;
            for (std::size_t s = 0; s < latent.slots(); ++s) {
                for (std::size_t j = 0; j < m; ++j) {
                    latent.alpha(s, j) = (1.0 - g) * latent.alpha(s, j) + g * 1.0;
                    latent.beta(s, j) = (1.0 - g) * latent.beta(s, j) + g * 1.0;
                }
            }
        }
        for (const auto& e : session.observations.entries) {
            const std::size_t s = latent.slot(e.feature, used_k[e.feature]);
            if (e.value != 0)
                latent.alpha(s, point.label) += 1.0;
            else
                latent.beta(s, point.label) += 1.0;
            latent.usage(s, point.label) += 1.0;
        }
        state.class_counts[point.label] += 1.0;
        latent.class_counts = state.class_counts;

        if (ofs) {
            std::vector<double> estimates(n, 0.0);
            std::vector<char> selected(n, 0);
            for (std::size_t i : ofs->selected) selected[i] = 1;
            for (std::size_t i = 0; i < n; ++i) {
                bool queried = session.observations.contains(i);
                double x = 0.0;
                for (const auto& e : session.observations.entries)
                    if (e.feature == i) x = e.value;
                estimates[i] =
                    ofs_estimate(x, queried, selected[i] != 0, ofs->budget_b, n, ofs->epsilon).value;
            }
            ofs_update(*ofs, estimates, point.label, session.prediction);
        }

        rec.prediction = session.prediction;
        rec.cost = session.observations.total_cost;
        rec.correct = session.prediction == point.label;
        rec.train_utility = session.utility;
        rec.stop_reason = session.stop_reason;
        rec.queries = session.queries_made;
        rec.distinct_hypotheses = session.distinct_hypotheses;
        for (const auto& e : session.observations.entries) rec.queried_features.push_back(e.feature);
        if (ofs) rec.ofs_selected = ofs->selected;
        out.records.push_back(rec);
        if (on_epoch) on_epoch(rec, state);
    }
    return out;
}

}  // namespace ufodt
