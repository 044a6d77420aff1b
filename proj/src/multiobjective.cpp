#include "rlaif/multiobjective.hpp"

#include <cmath>
#include <numbers>

namespace rlaif {

namespace {

Mat directions_as_columns(const std::vector<Direction>& v_stars, const char* op) {
    if (v_stars.empty()) {
        throw std::invalid_argument(std::string(op) + ": need at least one objective");
    }
    const Eigen::Index d = v_stars.front().dim();
    Mat v(d, static_cast<Eigen::Index>(v_stars.size()));
    for (std::size_t i = 0; i < v_stars.size(); ++i) {
        if (v_stars[i].dim() != d) {
            throw std::invalid_argument(std::string(op) + ": objectives must share one dimension");
        }
        v.col(static_cast<Eigen::Index>(i)) = v_stars[i].vec();
    }
    return v;
}

constexpr double kEmptyNorm = 1e-8;
constexpr double kNonemptyNorm = 1e-4;

}  // namespace

Vec per_objective_deltas(const MultiValueEncoding& values, const Mat& sigma, const Direction& v_c,
                         double lambda) {
    if (v_c.dim() != values.dim()) {
        throw std::invalid_argument("per_objective_deltas: dimension mismatch");
    }
    validate_covariance(sigma, values.dim(), "per_objective_deltas");
    return lambda * (values.directions_matrix().transpose() * (sigma * v_c.vec()));
}

TradeoffProfile classify_tradeoff(const Vec& deltas) {
    if (deltas.size() < 1) {
        throw std::invalid_argument("classify_tradeoff: empty delta vector");
    }
    TradeoffProfile profile;
    profile.signs.reserve(static_cast<std::size_t>(deltas.size()));
    bool any_zero = false, any_pos = false, any_neg = false;
    for (Eigen::Index i = 0; i < deltas.size(); ++i) {
        const int s = (deltas[i] > 0.0) - (deltas[i] < 0.0);
        profile.signs.push_back(s);
        any_zero |= s == 0;
        any_pos |= s > 0;
        any_neg |= s < 0;
    }
    if (any_zero) {
        profile.classification = TradeoffClass::boundary;
    } else if (any_pos && any_neg) {
        profile.classification = TradeoffClass::trade_off_inducing;
    } else if (any_pos) {
        profile.classification = TradeoffClass::pareto_improving;
    } else {
        profile.classification = TradeoffClass::pareto_degrading;
    }
    return profile;
}

ConeMembership pareto_cone_membership(const std::vector<Direction>& v_stars, const Mat& sigma,
                                      const Direction& v_c) {
    const Mat v = directions_as_columns(v_stars, "pareto_cone_membership");
    if (v_c.dim() != v.rows()) {
        throw std::invalid_argument("pareto_cone_membership: v_c dimension mismatch");
    }
    validate_covariance(sigma, v.rows(), "pareto_cone_membership");
    const Vec scores = v.transpose() * (sigma * v_c.vec());
    ConeMembership out;
    out.is_pareto = true;
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
        if (!(scores[i] > 0.0)) {
            out.is_pareto = false;
            out.violated.push_back(static_cast<int>(i));
        }
    }
    return out;
}

ConeMembership pareto_cone_membership(const std::vector<Direction>& v_stars, const Direction& v_c) {
    const Eigen::Index d = v_stars.empty() ? 0 : v_stars.front().dim();
    return pareto_cone_membership(v_stars, Mat::Identity(d, d), v_c);
}

MinNormPoint min_norm_in_hull(const Mat& v_columns) {
    const Eigen::Index m = v_columns.cols();
    if (m < 1) {
        throw std::invalid_argument("min_norm_in_hull: need at least one column");
    }
    if (m > 16) {
        throw std::invalid_argument("min_norm_in_hull: face enumeration capped at 16 columns");
    }

    const Mat gram = v_columns.transpose() * v_columns;
    MinNormPoint best;
    best.norm = std::numeric_limits<double>::infinity();

    // The minimizer lies on some face of the simplex; solve the equality-
    // constrained stationarity system for every support set and keep the
    // feasible candidate with the smallest norm.
    const unsigned subsets = 1u << m;
    for (unsigned mask = 1; mask < subsets; ++mask) {
        std::vector<Eigen::Index> support;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (mask & (1u << i)) support.push_back(i);
        }
        const auto k = static_cast<Eigen::Index>(support.size());

        // KKT system: minimize a' G a subject to 1' a = 1.
        Mat kkt = Mat::Zero(k + 1, k + 1);
        for (Eigen::Index r = 0; r < k; ++r) {
            for (Eigen::Index c = 0; c < k; ++c) kkt(r, c) = 2.0 * gram(support[r], support[c]);
            kkt(r, k) = 1.0;
            kkt(k, r) = 1.0;
        }
        Vec rhs = Vec::Zero(k + 1);
        rhs[k] = 1.0;

        const Vec sol = kkt.completeOrthogonalDecomposition().solve(rhs);
        if (!sol.allFinite()) continue;
        if ((kkt * sol - rhs).norm() > 1e-9 * std::max(1.0, rhs.norm())) continue;

        Vec alpha = Vec::Zero(m);
        bool feasible = true;
        for (Eigen::Index r = 0; r < k; ++r) {
            if (sol[r] < -1e-12) {
                feasible = false;
                break;
            }
            alpha[support[r]] = std::max(sol[r], 0.0);
        }
        if (!feasible) continue;
        const double total = alpha.sum();
        if (total <= 0.0) continue;
        alpha /= total;

        const Vec point = v_columns * alpha;
        const double norm = point.norm();
        if (norm < best.norm) {
            best.weights = alpha;
            best.point = point;
            best.norm = norm;
        }
    }

    if (!std::isfinite(best.norm)) {
        throw std::logic_error("min_norm_in_hull: no feasible face (should be impossible)");
    }
    return best;
}

ConeCertificate cone_emptiness(const std::vector<Direction>& v_stars) {
    const Mat v = directions_as_columns(v_stars, "cone_emptiness");
    for (Eigen::Index i = 0; i < v.cols(); ++i) {
        if (v.col(i).norm() <= 1e-12) {
            throw std::invalid_argument("cone_emptiness: objective " + std::to_string(i) + " is zero");
        }
    }

    const MinNormPoint mnp = min_norm_in_hull(v);
    ConeCertificate cert;
    cert.min_norm = mnp.norm;
    if (mnp.norm <= kEmptyNorm) {
        cert.status = ConeStatus::empty;
        cert.weights = mnp.weights;
        return cert;
    }
    if (mnp.norm < kNonemptyNorm) {
        cert.status = ConeStatus::degenerate;
        cert.weights = mnp.weights;
        return cert;
    }
    // The minimum-norm point p satisfies <p, v_i> >= ||p||^2 for every
    // objective, so p / ||p||^2 is a unit-margin witness.
    cert.status = ConeStatus::nonempty;
    cert.witness = mnp.point / (mnp.norm * mnp.norm);
    return cert;
}

double two_objective_cone_width(const Direction& v_help, const Direction& v_harm) {
    if (v_help.dim() != v_harm.dim()) {
        throw std::invalid_argument("two_objective_cone_width: dimension mismatch");
    }
    const double nh = v_help.norm(), ng = v_harm.norm();
    if (nh <= 1e-12 || ng <= 1e-12) {
        throw std::invalid_argument("two_objective_cone_width: zero objective direction");
    }
    const double c = std::clamp(v_help.vec().dot(v_harm.vec()) / (nh * ng), -1.0, 1.0);
    const double theta = std::acos(c);
    return std::clamp(std::numbers::pi - theta, 0.0, std::numbers::pi);
}

Direction optimal_weighted_constitution(const std::vector<Direction>& v_stars, const Vec& alpha,
                                        const Mat& sigma) {
    const Mat v = directions_as_columns(v_stars, "optimal_weighted_constitution");
    if (alpha.size() != v.cols()) {
        throw std::invalid_argument("optimal_weighted_constitution: one weight per objective required");
    }
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        if (!(alpha[i] > 0.0)) {
            throw std::invalid_argument("optimal_weighted_constitution: weights must be strictly positive");
        }
    }
    validate_covariance(sigma, v.rows(), "optimal_weighted_constitution");
    const Vec resultant = sigma * (v * alpha);
    if (resultant.norm() <= 1e-12) {
        throw std::invalid_argument(
            "optimal_weighted_constitution: weighted objectives cancel; no improving direction exists");
    }
    return normalize(Direction(resultant));
}

}  // namespace rlaif
