// Test-only oracles, independent of the library's sampling and tilting code
// paths. They use std:: RNG directly and their own arithmetic so agreement
// with the library is meaningful.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Estimate {
    double value;
    double std_error;
};

inline Mat cholesky_like_factor(const Mat& sigma) {
    Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
    Vec lambda = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

// Self-normalized importance sampling of E_{pi}[phi(h)] where
// pi(h) ~ N(mu, sigma) reweighted by exp(<h, u>). Draws come from the plain
// std library; weights are max-stabilized.
template <typename Phi>
Estimate tilted_expectation(const Vec& mu, const Mat& sigma, const Vec& u, Phi&& phi, long n,
                            unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const Mat factor = cholesky_like_factor(sigma);
    const Eigen::Index d = mu.size();

    std::vector<double> exponents(static_cast<std::size_t>(n));
    std::vector<double> values(static_cast<std::size_t>(n));
    Vec z(d), h(d);
    for (long i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) z[j] = normal(rng);
        h = mu + factor * z;
        exponents[static_cast<std::size_t>(i)] = h.dot(u);
        values[static_cast<std::size_t>(i)] = phi(h);
    }
    double max_e = exponents[0];
    for (double e : exponents) max_e = std::max(max_e, e);

    double sum_w = 0.0, sum_wv = 0.0;
    for (long i = 0; i < n; ++i) {
        const double w = std::exp(exponents[static_cast<std::size_t>(i)] - max_e);
        sum_w += w;
        sum_wv += w * values[static_cast<std::size_t>(i)];
    }
    const double ratio = sum_wv / sum_w;
    double var_num = 0.0;
    for (long i = 0; i < n; ++i) {
        const double w = std::exp(exponents[static_cast<std::size_t>(i)] - max_e);
        const double dev = values[static_cast<std::size_t>(i)] - ratio;
        var_num += w * w * dev * dev;
    }
    return {ratio, std::sqrt(var_num) / sum_w};
}

// Plain Monte Carlo mean of phi under N(mu, sigma).
template <typename Phi>
Estimate gaussian_mean(const Vec& mu, const Mat& sigma, Phi&& phi, long n, unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const Mat factor = cholesky_like_factor(sigma);
    const Eigen::Index d = mu.size();
    double sum = 0.0, sum_sq = 0.0;
    Vec z(d), h(d);
    for (long i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) z[j] = normal(rng);
        h = mu + factor * z;
        const double v = phi(h);
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = (sum_sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
    return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n))};
}

// Plain Monte Carlo covariance of phi and psi under N(mu, sigma).
template <typename Phi, typename Psi>
Estimate gaussian_covariance(const Vec& mu, const Mat& sigma, Phi&& phi, Psi&& psi, long n,
                             unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const Mat factor = cholesky_like_factor(sigma);
    const Eigen::Index d = mu.size();
    std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    Vec z(d), h(d);
    for (long i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) z[j] = normal(rng);
        h = mu + factor * z;
        a[static_cast<std::size_t>(i)] = phi(h);
        b[static_cast<std::size_t>(i)] = psi(h);
    }
    double mean_a = 0.0, mean_b = 0.0;
    for (long i = 0; i < n; ++i) {
        mean_a += a[static_cast<std::size_t>(i)];
        mean_b += b[static_cast<std::size_t>(i)];
    }
    mean_a /= static_cast<double>(n);
    mean_b /= static_cast<double>(n);
    double cov = 0.0, var_of_products = 0.0;
    for (long i = 0; i < n; ++i) {
        const double p = (a[static_cast<std::size_t>(i)] - mean_a) * (b[static_cast<std::size_t>(i)] - mean_b);
        cov += p;
        var_of_products += p * p;
    }
    cov /= static_cast<double>(n - 1);
    var_of_products = var_of_products / static_cast<double>(n - 1) - cov * cov;
    return {cov, std::sqrt(std::max(var_of_products, 0.0) / static_cast<double>(n))};
}

// Exact tilted mean of a quadratic form under a Gaussian base:
// for f(h) = -(<h,v> - tau)^2 and tilt exp(lambda <h,u>), the tilted
// distribution is N(mu + lambda sigma u, sigma), so
// E[f] = -(v' sigma v + (m(lambda) - tau)^2), m(lambda) = <mu,v> + lambda v' sigma u.
inline double exact_quadratic_tilted_mean(const Vec& mu, const Mat& sigma, const Vec& v, double tau,
                                          const Vec& u, double lambda) {
    const double var = v.dot(sigma * v);
    const double m = mu.dot(v) + lambda * v.dot(sigma * u);
    return -(var + (m - tau) * (m - tau));
}

}  // namespace oracle
