#pragma once

#include "rlaif/gaussian_world.hpp"

#include <string>
#include <vector>

namespace rlaif {

// A smooth safety function f over representations with an analytic gradient.
// Three kinds are built in:
//   linear(v):                f(h) = <h, v>
//   quadratic(v, tau):        f(h) = -(<h, v> - tau)^2, peaked at <h,v> = tau
//   smooth_saturating(v, s):  f(h) = s * tanh(<h, v> / s), odd and bounded
class SafetyFunction {
public:
    enum class Kind { linear, quadratic, smooth_saturating };

    static SafetyFunction linear(Direction v);
    static SafetyFunction quadratic(Direction v, double tau);
    static SafetyFunction smooth_saturating(Direction v, double scale);

    double value(const Vec& h) const;
    Vec gradient(const Vec& h) const;

    Kind kind() const { return kind_; }
    Eigen::Index dim() const { return v_.dim(); }
    const Direction& direction() const { return v_; }
    double parameter() const { return param_; }  // tau or scale; 0 for linear
    std::string describe() const;

private:
    SafetyFunction(Kind kind, Direction v, double param);

    Kind kind_;
    Direction v_;
    double param_;
};

// A finite stand-in for the set of preference functions reachable by some
// judging prompt.
struct PromptableFamily {
    struct Member {
        std::string label;
        SafetyFunction function;
    };
    std::vector<Member> members;

    PromptableFamily() = default;
    explicit PromptableFamily(std::vector<Member> members_in);
    Eigen::Index dim() const { return members.front().function.dim(); }
};

// First-order alignment change of a tilt along v_c for a general f, checked
// against measurement:
//   prediction = lambda * Cov_base(f(h), <h, v_c>)
//   mc_delta   = E_tilted[f] - E_base[f] by self-normalized importance
//                sampling on the same draws (same seed), so the difference
//                mc_delta - prediction is a pure higher-order remainder up to
//                the shared sampling noise.
// remainder_std_error is a batch-means standard error of that difference.
struct CovarianceImprovement {
    double prediction;
    double prediction_std_error;
    double mc_delta;
    double mc_std_error;
    double remainder_std_error;
};

CovarianceImprovement covariance_improvement(const RepresentationWorld& world, const SafetyFunction& f,
                                             const Direction& v_c, double lambda, std::int64_t n,
                                             std::uint64_t seed);

// Population-average gradient of f under the base measure, with per-component
// standard errors. Each call also validates the analytic gradient against
// central finite differences (step 1e-5, relative tolerance 1e-4) at 10
// seeded random points and throws if they disagree.
struct GradientEstimate {
    Vec mean;
    Vec std_errors;
    std::int64_t n;
};

GradientEstimate stein_direction(const RepresentationWorld& world, const SafetyFunction& f, std::int64_t n,
                                 std::uint64_t seed);

// Both sides of the Gaussian covariance identity
//   Cov(f(h), <h, v_c>) = <Sigma v_c, E[grad f(h)]>
// estimated by independent Monte Carlo runs. agree is |lhs - rhs| within
// 4 combined standard errors.
struct SteinIdentityCheck {
    double lhs;
    double lhs_std_error;
    double rhs;
    double rhs_std_error;
    bool agree;
};

SteinIdentityCheck verify_stein_identity(const RepresentationWorld& world, const SafetyFunction& f,
                                         const Direction& v_c, std::int64_t n, std::uint64_t seed);

// For the peaked quadratic safety function, the average-gradient direction is
// -2(<mu, v> - tau) v: a tilt along +v helps below the peak, hurts above it.
// Reports the coefficient sign on a grid of base means.
struct NonMonotoneProbePoint {
    Vec mu;
    double coefficient;  // -2(<mu, v> - tau)
    int sign;            // sign of the coefficient; 0 exactly at the peak
};

std::vector<NonMonotoneProbePoint> non_monotone_probe(const Direction& v, double tau,
                                                      const std::vector<Vec>& mu_grid);

// Best member of a finite preference family by covariance with f under the
// base measure, against the Cauchy-Schwarz bound std(f) * max_j std(F_j).
// All members are evaluated on the same draws.
struct PromptableCeiling {
    std::string best_label;
    double best_cov;
    double best_cov_std_error;
    double cauchy_schwarz_bound;
    std::vector<double> covariances;  // one per family member, in order
};

PromptableCeiling promptable_ceiling(const RepresentationWorld& world, const SafetyFunction& f,
                                     const PromptableFamily& family, std::int64_t n, std::uint64_t seed);

// Monte Carlo covariance of f(h) and g(h) under the base measure, with a
// batch-means standard error.
struct CovarianceEstimate {
    double covariance;
    double std_error;
    std::int64_t n;
};

CovarianceEstimate base_covariance(const RepresentationWorld& world, const std::function<double(const Vec&)>& f,
                                   const std::function<double(const Vec&)>& g, std::int64_t n,
                                   std::uint64_t seed);

}  // namespace rlaif
