#include "rlaif/linear_model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace rlaif {

namespace {

void check_dims(const Direction& a, const Direction& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    }
}

}  // namespace

Direction::Direction(Vec components) : components_(std::move(components)) {
    if (components_.size() < 1) {
        throw std::invalid_argument("Direction: dimension must be >= 1");
    }
    if (!components_.allFinite()) {
        throw std::invalid_argument("Direction: components must be finite");
    }
}

Direction::Direction(std::initializer_list<double> components)
    : Direction(Eigen::Map<const Vec>(components.begin(), static_cast<Eigen::Index>(components.size()))) {}

Direction normalize(const Direction& v) {
    const double n = v.norm();
    if (n <= 1e-12) {
        throw std::invalid_argument("normalize: zero vector (norm <= 1e-12)");
    }
    return Direction(v.vec() / n);
}

double alignment_correlation(const Direction& a, const Direction& b) {
    check_dims(a, b, "alignment_correlation");
    return a.vec().dot(b.vec());
}

double alignment_correlation(const Direction& a, const Direction& b, const Mat& sigma) {
    check_dims(a, b, "alignment_correlation");
    if (sigma.rows() != a.dim() || sigma.cols() != a.dim()) {
        throw std::invalid_argument("alignment_correlation: sigma dimension mismatch");
    }
    return a.vec().dot(sigma * b.vec());
}

void validate_covariance(const Mat& sigma, Eigen::Index d, const std::string& context) {
    if (sigma.rows() != d || sigma.cols() != d) {
        throw std::invalid_argument(context + ": covariance must be " + std::to_string(d) + "x" +
                                    std::to_string(d) + ", got " + std::to_string(sigma.rows()) + "x" +
                                    std::to_string(sigma.cols()));
    }
    if (!sigma.allFinite()) {
        throw std::invalid_argument(context + ": covariance has non-finite entries");
    }
    const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10) {
        throw std::invalid_argument(context + ": covariance not symmetric (max asymmetry " +
                                    std::to_string(asym) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(sigma, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    // Tiny negative eigenvalues from finite-precision factorizations pass.
    if (min_eig < -1e-10) {
        throw std::invalid_argument(context + ": covariance not positive semidefinite (min eigenvalue " +
                                    std::to_string(min_eig) + ")");
    }
}

ValueEncoding::ValueEncoding(Direction v_star_in, double sigma_eps_in)
    : v_star(std::move(v_star_in)), sigma_eps(sigma_eps_in) {
    if (!(sigma_eps >= 0.0) || !std::isfinite(sigma_eps)) {
        throw std::invalid_argument("ValueEncoding: sigma_eps must be finite and >= 0");
    }
}

MultiValueEncoding::MultiValueEncoding(std::vector<Direction> v_stars_in, std::vector<double> sigma_eps_in)
    : v_stars(std::move(v_stars_in)), sigma_eps(std::move(sigma_eps_in)) {
    if (v_stars.empty()) {
        throw std::invalid_argument("MultiValueEncoding: need at least one objective");
    }
    if (sigma_eps.size() != v_stars.size()) {
        throw std::invalid_argument("MultiValueEncoding: one sigma_eps per objective required");
    }
    const Eigen::Index d = v_stars.front().dim();
    for (const Direction& v : v_stars) {
        if (v.dim() != d) {
            throw std::invalid_argument("MultiValueEncoding: objectives must share one dimension");
        }
    }
    for (double s : sigma_eps) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw std::invalid_argument("MultiValueEncoding: sigma_eps must be finite and >= 0");
        }
    }
}

Mat MultiValueEncoding::directions_matrix() const {
    Mat m(dim(), static_cast<Eigen::Index>(v_stars.size()));
    for (std::size_t i = 0; i < v_stars.size(); ++i) {
        m.col(static_cast<Eigen::Index>(i)) = v_stars[i].vec();
    }
    return m;
}

double encoding_quality(const ValueEncoding& enc) {
    const double signal = enc.v_star.vec().squaredNorm();
    const double total = signal + enc.sigma_eps * enc.sigma_eps;
    if (total == 0.0) return 0.0;  // no signal and no noise: scores are constant
    return std::sqrt(signal / total);
}

double encoding_quality(const ValueEncoding& enc, const Mat& sigma) {
    validate_covariance(sigma, enc.v_star.dim(), "encoding_quality");
    const double signal = enc.v_star.vec().dot(sigma * enc.v_star.vec());
    const double total = signal + enc.sigma_eps * enc.sigma_eps;
    if (total == 0.0) return 0.0;
    // Clamp against tiny negative quadratic forms from PSD clipping.
    return std::sqrt(std::min(1.0, std::max(signal, 0.0) / total));
}

}  // namespace rlaif
