#pragma once

#include "rlaif/linear_model.hpp"
#include "rlaif/parallel.hpp"
#include "rlaif/rng.hpp"

#include <cstdint>
#include <functional>
#include <memory>

namespace rlaif {

// The synthetic representation universe: a Gaussian base measure N(mu, sigma)
// over R^d together with a linear value encoding. Immutable once built;
// shared by policies and safe to use from any thread.
class RepresentationWorld {
public:
    RepresentationWorld(Vec mu, Mat sigma, ValueEncoding encoding);

    static std::shared_ptr<const RepresentationWorld> create(Vec mu, Mat sigma, ValueEncoding encoding);

    const Vec& mu() const { return mu_; }
    const Mat& sigma() const { return sigma_; }
    const ValueEncoding& encoding() const { return encoding_; }
    Eigen::Index dim() const { return mu_.size(); }

    // Symmetric PSD square root of sigma, with eigenvalues in [-1e-10, 0)
    // clipped to 0 so rank-deficient covariances factor cleanly.
    const Mat& sigma_sqrt() const { return sigma_sqrt_; }

    double rho() const;      // encoding quality under this covariance
    double sigma_s() const;  // std of the safety score S = <h, v*> + eps

private:
    Vec mu_;
    Mat sigma_;
    ValueEncoding encoding_;
    Mat sigma_sqrt_;
};

using WorldPtr = std::shared_ptr<const RepresentationWorld>;

// An energy-based policy over representations: pi_u(h) proportional to
// pi_0(h) * exp(<h, u>), where pi_0 is the world's base measure and u is the
// score direction. u = 0 is the base policy.
class Policy {
public:
    explicit Policy(WorldPtr world);
    Policy(WorldPtr world, Direction score_direction);

    const Direction& score_direction() const { return score_direction_; }
    const RepresentationWorld& world() const { return *world_; }
    const WorldPtr& world_ptr() const { return world_; }

private:
    WorldPtr world_;
    Direction score_direction_;
};

// Feedback training with strength lambda moves the score direction from u to
// u + lambda * direction. No normalization is applied.
Policy tilt_policy(const Policy& base, const Direction& direction, double lambda);

struct TiltedMoments {
    Vec mean;
    Mat cov;
};

// Distribution of pi_u for a Gaussian base: the exponential tilt of
// N(mu, sigma) by exp(<h, u>) is N(mu + sigma*u, sigma). For Gaussian bases
// this is exact at every u — the mean shift sigma*u carries no higher-order
// remainder and the covariance is unchanged.
TiltedMoments tilted_gaussian_moments(const RepresentationWorld& world, const Direction& u);

// n representations drawn from a policy plus their noisy safety scores
// S_i = <h_i, v*> + eps_i, eps_i ~ N(0, sigma_eps^2). Identical seeds give
// bit-identical batches regardless of execution mode or thread count.
struct SampleBatch {
    Mat representations;  // n x d
    Vec safety_scores;    // n
    std::uint64_t seed;
};

SampleBatch sample_policy(const Policy& policy, std::int64_t n, std::uint64_t seed);

struct MonteCarloEstimate {
    double estimate;
    double std_error;
    std::int64_t n;
};

// Sample mean of the safety score under the policy, with its standard error.
MonteCarloEstimate estimate_alignment(const Policy& policy, std::int64_t n, std::uint64_t seed);

// Exact expected safety score of a policy: <mu + sigma*u, v*>.
double closed_form_alignment(const Policy& policy);

// Fills one draw from the base distribution using the given stream. Must be
// deterministic in the stream state, so that chunk-seeded kernels stay
// reproducible across thread counts.
using RowSampler = std::function<void(RandomStream&, Eigen::Ref<Vec>)>;

// Sampler for the world's base measure N(mu, sigma).
RowSampler gaussian_base_sampler(const RepresentationWorld& world);

// Self-normalized importance-sampling estimate of E_{pi_lambda}[phi(h)] where
// pi_lambda is the base sampler tilted by exp(lambda * <h, u>). Works for any
// base distribution; for Gaussian bases it must agree with the closed-form
// tilt. Exponents are max-stabilized before exponentiation, so the result is
// invariant to adding a constant to all exponents; the only failure mode is a
// non-finite estimate, which raises.
MonteCarloEstimate importance_tilt_expectation(const RowSampler& base_sampler, Eigen::Index dim,
                                               const Direction& u, double lambda,
                                               const std::function<double(const Vec&)>& phi,
                                               std::int64_t n, std::uint64_t seed);

}  // namespace rlaif
