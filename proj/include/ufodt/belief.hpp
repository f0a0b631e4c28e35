#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ufodt/common.hpp"
#include "ufodt/observation.hpp"

namespace ufodt {

// One sampled (or estimated) probabilistic table: theta(i,j) = P[X_i=1 | Y_j]
// together with the class prior P[Y].
struct ThetaTable {
    Matrix theta;                     // n x m
    std::vector<double> class_prior;  // length m, sums to 1

    std::size_t n() const { return theta.rows(); }
    std::size_t m() const { return theta.cols(); }
};

// Discount-toward-injected-prior update used on non-stationary streams.
struct DriftConfig {
    bool enabled = false;
    double gamma = 0.1;
    Matrix alpha_bar;  // n x m, strictly positive
    Matrix beta_bar;

    static DriftConfig off() { return DriftConfig{}; }
    static DriftConfig uniform(std::size_t n, std::size_t m, double gamma) {
        DriftConfig d;
        d.enabled = true;
        d.gamma = gamma;
        d.alpha_bar = Matrix(n, m, 1.0);
        d.beta_bar = Matrix(n, m, 1.0);
        return d;
    }
};

// Beta-Bernoulli naive-Bayes belief over the environment: one Beta(alpha,
// beta) per (feature, class) plus smoothed class counts defining P[Y].
struct BeliefState {
    Matrix alpha;                      // n x m, all entries > 0
    Matrix beta;                       // n x m, all entries > 0
    std::vector<double> class_counts;  // length m, nonnegative

    static BeliefState uniform(std::size_t n, std::size_t m);

    std::size_t n() const { return alpha.rows(); }
    std::size_t m() const { return alpha.cols(); }

    std::vector<double> class_prior() const;
    Matrix posterior_mean() const;  // alpha / (alpha + beta)
    void check_invariants() const;
};

// Draw theta(i,j) ~ Beta(alpha_ij, beta_ij) independently for every entry.
ThetaTable sample_theta(const BeliefState& belief, Rng& rng);

// Conjugate update from one epoch's observations and revealed label. With
// drift enabled the whole table is first discounted toward the injected
// prior, then the same increments are applied.
BeliefState update_posterior(BeliefState belief, const ObservationSet& observations,
                             std::size_t true_label, const DriftConfig& drift);

// P[Y_j | x_F] by Bayes rule under conditional independence. Accumulated in
// log space with max-subtraction. Empty observations return the prior.
// Throws DegenerateEvidenceError if every class likelihood is exactly zero.
std::vector<double> class_posterior(const ThetaTable& theta, const ObservationSet& observations);

// Marginal probability of a full realization: sum_j P[Y_j] prod_i
// theta_ij^{h_i} (1-theta_ij)^{1-h_i}.
double hypothesis_marginal(const ThetaTable& theta, std::span<const std::uint8_t> bits);
double log_hypothesis_marginal(const ThetaTable& theta, std::span<const std::uint8_t> bits);

// Prior that blends the uniform Beta(1,1) (lambda=0) with a kappa-strength
// prior whose mean equals theta_star (lambda=1).
BeliefState interpolate_prior(const ThetaTable& theta_star, double lambda, double kappa);

}  // namespace ufodt
