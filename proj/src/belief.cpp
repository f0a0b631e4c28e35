#include "ufodt/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ufodt {

BeliefState BeliefState::uniform(std::size_t n, std::size_t m) {
    BeliefState b;
    b.alpha = Matrix(n, m, 1.0);
    b.beta = Matrix(n, m, 1.0);
    b.class_counts.assign(m, 1.0);
    return b;
}

std::vector<double> BeliefState::class_prior() const {
    double total = 0.0;
    for (double c : class_counts) total += c;
    std::vector<double> prior(class_counts.size());
    if (total <= 0.0) {
        std::fill(prior.begin(), prior.end(), 1.0 / static_cast<double>(prior.size()));
        return prior;
    }
    for (std::size_t j = 0; j < prior.size(); ++j) prior[j] = class_counts[j] / total;
    return prior;
}

Matrix BeliefState::posterior_mean() const {
    Matrix mean(n(), m());
    for (std::size_t i = 0; i < n(); ++i)
        for (std::size_t j = 0; j < m(); ++j)
            mean(i, j) = alpha(i, j) / (alpha(i, j) + beta(i, j));
    return mean;
}

void BeliefState::check_invariants() const {
    if (!alpha.same_shape(beta)) throw std::invalid_argument("BeliefState: alpha/beta shape mismatch");
    if (class_counts.size() != m()) throw std::invalid_argument("BeliefState: class_counts length mismatch");
    for (double v : alpha.data())
        if (!(v > 0.0)) throw std::invalid_argument("BeliefState: nonpositive alpha");
    for (double v : beta.data())
        if (!(v > 0.0)) throw std::invalid_argument("BeliefState: nonpositive beta");
}

ThetaTable sample_theta(const BeliefState& belief, Rng& rng) {
    ThetaTable t;
    t.theta = Matrix(belief.n(), belief.m());
    for (std::size_t i = 0; i < belief.n(); ++i)
        for (std::size_t j = 0; j < belief.m(); ++j)
            t.theta(i, j) = beta_sample(rng, belief.alpha(i, j), belief.beta(i, j));
    t.class_prior = belief.class_prior();
    return t;
}

BeliefState update_posterior(BeliefState belief, const ObservationSet& observations,
                             std::size_t true_label, const DriftConfig& drift) {
    const std::size_t n = belief.n();
    const std::size_t m = belief.m();
    if (true_label >= m) throw std::out_of_range("update_posterior: label out of range");
    for (const auto& e : observations.entries)
        if (e.feature >= n) throw std::out_of_range("update_posterior: feature index out of range");

    if (drift.enabled) {
        if (!drift.alpha_bar.same_shape(belief.alpha) || !drift.beta_bar.same_shape(belief.beta))
            throw std::invalid_argument("update_posterior: drift prior shape mismatch");
        // discount the whole table toward the injected prior, then increment
        const double g = drift.gamma;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                belief.alpha(i, j) = (1.0 - g) * belief.alpha(i, j) + g * drift.alpha_bar(i, j);
                belief.beta(i, j) = (1.0 - g) * belief.beta(i, j) + g * drift.beta_bar(i, j);
            }
        }
    }
    for (const auto& e : observations.entries) {
        if (e.value != 0)
            belief.alpha(e.feature, true_label) += 1.0;
        else
            belief.beta(e.feature, true_label) += 1.0;
    }
    belief.class_counts[true_label] += 1.0;
    return belief;
}

std::vector<double> class_posterior(const ThetaTable& theta, const ObservationSet& observations) {
    const std::size_t m = theta.m();
    std::vector<double> logp(m);
    for (std::size_t j = 0; j < m; ++j) {
        double lp = std::log(theta.class_prior[j]);
        for (const auto& e : observations.entries) {
            if (e.feature >= theta.n())
                throw std::out_of_range("class_posterior: feature index out of range");
            double th = theta.theta(e.feature, j);
            lp += std::log(e.value != 0 ? th : 1.0 - th);
        }
        logp[j] = lp;
    }
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : logp) mx = std::max(mx, v);
    if (!(mx > -std::numeric_limits<double>::infinity()))
        throw DegenerateEvidenceError("class_posterior: all class likelihoods are zero");
    std::vector<double> post(m);
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        post[j] = std::exp(logp[j] - mx);
        total += post[j];
    }
    for (double& v : post) v /= total;
    return post;
}

double log_hypothesis_marginal(const ThetaTable& theta, std::span<const std::uint8_t> bits) {
    const std::size_t n = theta.n();
    const std::size_t m = theta.m();
    if (bits.size() != n) throw std::invalid_argument("hypothesis_marginal: bit vector length mismatch");
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> logp(m);
    for (std::size_t j = 0; j < m; ++j) {
        double lp = std::log(theta.class_prior[j]);
        for (std::size_t i = 0; i < n; ++i) {
            double th = theta.theta(i, j);
            lp += std::log(bits[i] ? th : 1.0 - th);
        }
        logp[j] = lp;
        mx = std::max(mx, lp);
    }
    if (!(mx > -std::numeric_limits<double>::infinity())) return mx;
    double total = 0.0;
    for (double lp : logp) total += std::exp(lp - mx);
    return mx + std::log(total);
}

double hypothesis_marginal(const ThetaTable& theta, std::span<const std::uint8_t> bits) {
    double lm = log_hypothesis_marginal(theta, bits);
    return std::isinf(lm) ? 0.0 : std::exp(lm);
}

BeliefState interpolate_prior(const ThetaTable& theta_star, double lambda, double kappa) {
    if (lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("interpolate_prior: lambda outside [0,1]");
    if (!(kappa > 0.0)) throw std::invalid_argument("interpolate_prior: kappa must be positive");
    const std::size_t n = theta_star.n();
    const std::size_t m = theta_star.m();
    BeliefState b;
    b.alpha = Matrix(n, m);
    b.beta = Matrix(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double th = theta_star.theta(i, j);
            b.alpha(i, j) = (1.0 - lambda) * 1.0 + lambda * kappa * th;
            b.beta(i, j) = (1.0 - lambda) * 1.0 + lambda * kappa * (1.0 - th);
        }
    }
    b.class_counts.assign(m, 1.0);
    return b;
}

}  // namespace ufodt
