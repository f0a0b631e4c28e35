#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ufodt {

// Raised when every class likelihood underflows to exactly zero and no
// posterior can be formed; callers fall back to the prior.
struct DegenerateEvidenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised on malformed input data (unreadable cells, oracle failures,
// schema mismatches).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent per-component streams derived from one seed, so that adding
// or removing a consumer of one stream never perturbs the others.
inline Rng seeded_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return Rng(splitmix64(seed + 0x51b9c02ab9a7ee13ULL * stream));
}

inline double beta_sample(Rng& rng, double a, double b) {
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    double x = ga(rng);
    double y = gb(rng);
    double s = x + y;
    if (s <= 0.0) return 0.5;
    double v = x / s;
    // keep draws strictly inside (0,1)
    const double eps = 1e-12;
    if (v < eps) v = eps;
    if (v > 1.0 - eps) v = 1.0 - eps;
    return v;
}

// Draw an index proportional to the given nonnegative weights.
inline std::size_t sample_index(Rng& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) throw std::invalid_argument("sample_index: weights sum to zero");
    std::uniform_real_distribution<double> unif(0.0, total);
    double u = unif(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

inline double log2_safe(double p) { return p > 0.0 ? std::log2(p) : 0.0; }

// Shannon entropy in bits; 0*log(0) = 0.
inline double entropy_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

}  // namespace ufodt
