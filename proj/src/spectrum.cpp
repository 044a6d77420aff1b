#include "rlaif/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace rlaif {

double effective_dimension(const Vec& eigenvalues) {
    if (eigenvalues.size() < 1) {
        throw std::invalid_argument("effective_dimension: empty spectrum");
    }
    double sum = 0.0, sum_sq = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double lambda = eigenvalues[i];
        if (!(lambda >= -1e-12) || !std::isfinite(lambda)) {
            throw std::invalid_argument("effective_dimension: eigenvalues must be nonnegative");
        }
        const double clipped = std::max(lambda, 0.0);
        sum += clipped;
        sum_sq += clipped * clipped;
    }
    if (sum_sq == 0.0) {
        throw std::invalid_argument("effective_dimension: all-zero spectrum");
    }
    return sum * sum / sum_sq;
}

namespace {

// Eigenpairs of sigma in descending eigenvalue order.
std::pair<Vec, Mat> descending_eigs(const Mat& sigma, Eigen::Index d, const char* op) {
    validate_covariance(sigma, d, op);
    Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
    Vec values = es.eigenvalues().reverse();
    Mat vectors = es.eigenvectors().rowwise().reverse();
    return {std::move(values), std::move(vectors)};
}

}  // namespace

double value_concentration(const Mat& sigma, const Direction& v_star, Eigen::Index k) {
    const Eigen::Index d = v_star.dim();
    if (k < 1 || k > d) {
        throw std::invalid_argument("value_concentration: k must be in [1, d]");
    }
    const double norm_sq = v_star.vec().squaredNorm();
    if (norm_sq <= 1e-24) {
        throw std::invalid_argument("value_concentration: zero value direction");
    }
    auto [values, vectors] = descending_eigs(sigma, d, "value_concentration");
    double captured = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        const double proj = vectors.col(i).dot(v_star.vec());
        captured += proj * proj;
    }
    return captured / norm_sq;
}

SpectrumReport analyze_spectrum(const Mat& sigma, const Direction& v_star) {
    const Eigen::Index d = v_star.dim();
    const double norm_sq = v_star.vec().squaredNorm();
    if (norm_sq <= 1e-24) {
        throw std::invalid_argument("analyze_spectrum: zero value direction");
    }
    auto [values, vectors] = descending_eigs(sigma, d, "analyze_spectrum");

    SpectrumReport report;
    report.eigenvalues = values;
    report.d_eff = effective_dimension(values);
    report.concentration_curve.reserve(static_cast<std::size_t>(d));
    double captured = 0.0;
    for (Eigen::Index k = 1; k <= d; ++k) {
        const double proj = vectors.col(k - 1).dot(v_star.vec());
        captured += proj * proj;
        report.concentration_curve.emplace_back(k, captured / norm_sq);
    }
    return report;
}

PromptableSubspace::PromptableSubspace(Mat basis_rows) {
    if (basis_rows.rows() < 1 || basis_rows.cols() < 1) {
        throw std::invalid_argument("PromptableSubspace: basis must be nonempty");
    }
    if (!basis_rows.allFinite()) {
        throw std::invalid_argument("PromptableSubspace: basis has non-finite entries");
    }
    // Modified Gram-Schmidt with a second orthogonalization pass.
    Mat q(basis_rows.rows(), basis_rows.cols());
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < basis_rows.rows(); ++i) {
        Vec row = basis_rows.row(i).transpose();
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < rank; ++j) {
                row -= q.row(j).dot(row.transpose()) * q.row(j).transpose();
            }
        }
        const double norm = row.norm();
        if (norm <= 1e-10 * std::max(1.0, basis_rows.row(i).norm())) {
            throw std::invalid_argument("PromptableSubspace: basis rows are rank-deficient");
        }
        q.row(rank++) = (row / norm).transpose();
    }
    basis_ = q.topRows(rank);
}

AdversarialSearch find_adversarial_direction(const PromptableSubspace& subspace,
                                             const RepresentationWorld& world) {
    if (subspace.dim() != world.dim()) {
        throw std::invalid_argument("find_adversarial_direction: dimension mismatch");
    }
    const Vec target = world.sigma() * world.encoding().v_star.vec();
    const Vec coords = subspace.basis() * target;  // subspace coordinates of Sigma v*
    const double norm = coords.norm();

    if (norm < 1e-12) {
        // Subspace orthogonal to Sigma v*: every member leaves alignment flat.
        return {false, Direction(Vec::Zero(world.dim())), 0.0};
    }
    Direction v_adv(Vec(-(subspace.basis().transpose() * coords) / norm));
    const double predicted = world.encoding().v_star.vec().dot(world.sigma() * v_adv.vec());
    return {predicted < 0.0, std::move(v_adv), predicted};
}

ImprovementReport demonstrate_degradation(const RepresentationWorld& world, const Direction& v_adv,
                                          double lambda, std::int64_t n, std::uint64_t seed) {
    ImprovementReport report = verify_improvement(world, v_adv, lambda, n, seed);
    if (report.first_order_prediction < 0.0 && report.significant && report.mc_delta > 0.0) {
        throw std::logic_error(
            "demonstrate_degradation: Monte Carlo contradicts a negative exact prediction");
    }
    return report;
}

}  // namespace rlaif
