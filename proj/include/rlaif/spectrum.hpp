#pragma once

#include "rlaif/improvement.hpp"

#include <vector>

namespace rlaif {

// Participation ratio (sum lambda)^2 / sum lambda^2 of a nonnegative
// spectrum; between 1 (rank one) and d (isotropic).
double effective_dimension(const Vec& eigenvalues);

// Fraction of ||v*||^2 captured by the top-k eigenspace of sigma:
// sum_{i<=k} <v*, u_i>^2 / ||v*||^2, eigenvectors in descending eigenvalue
// order. Within a block of tied eigenvalues the split across k is basis-
// dependent (the decomposition's ordering is deterministic but arbitrary);
// at the block boundaries and at k = d the value is basis-free.
double value_concentration(const Mat& sigma, const Direction& v_star, Eigen::Index k);

struct SpectrumReport {
    Vec eigenvalues;  // descending
    double d_eff;
    std::vector<std::pair<Eigen::Index, double>> concentration_curve;  // (k, fraction)
};

SpectrumReport analyze_spectrum(const Mat& sigma, const Direction& v_star);

// Orthonormalized span of the directions a judging prompt can activate.
// Rows of the stored basis are orthonormal to 1e-10; rank-deficient input
// rows are rejected.
class PromptableSubspace {
public:
    explicit PromptableSubspace(Mat basis_rows);

    const Mat& basis() const { return basis_; }
    Eigen::Index rank() const { return basis_.rows(); }
    Eigen::Index dim() const { return basis_.cols(); }

private:
    Mat basis_;
};

// The direction in the subspace minimizing v*' Sigma v_c (closed form: the
// negated normalized subspace projection of Sigma v*). If the subspace is
// orthogonal to Sigma v* there is no degrading direction and found = false.
struct AdversarialSearch {
    bool found;
    Direction v_adv;          // unit vector in the subspace; zero when !found
    double predicted_delta;   // v*' Sigma v_adv at unit tilt strength
};

AdversarialSearch find_adversarial_direction(const PromptableSubspace& subspace,
                                             const RepresentationWorld& world);

// Measures the alignment change of tilting along v_adv. Throws if the
// Monte Carlo significantly contradicts a negative prediction (for a Gaussian
// base the prediction is exact, so a significant positive measurement means
// a defect, not noise).
ImprovementReport demonstrate_degradation(const RepresentationWorld& world, const Direction& v_adv,
                                          double lambda, std::int64_t n, std::uint64_t seed);

}  // namespace rlaif
