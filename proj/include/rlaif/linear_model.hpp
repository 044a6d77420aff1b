#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlaif {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A direction in representation space. Directions are plain vectors, not
// forced to unit norm: intermediate score directions are meaningful
// unnormalized, and normalization is an explicit operation.
class Direction {
public:
    explicit Direction(Vec components);
    Direction(std::initializer_list<double> components);

    const Vec& vec() const { return components_; }
    Eigen::Index dim() const { return components_.size(); }
    double norm() const { return components_.norm(); }
    double operator[](Eigen::Index i) const { return components_[i]; }

private:
    Vec components_;
};

// Returns v / ||v||. Throws on near-zero input (norm <= 1e-12).
Direction normalize(const Direction& v);

// a' Sigma b; Sigma defaults to the identity. The sign of this quantity is
// the self-improvement criterion for a tilt along b against objective a.
double alignment_correlation(const Direction& a, const Direction& b);
double alignment_correlation(const Direction& a, const Direction& b, const Mat& sigma);

// Validates that sigma is square of dimension d, symmetric to 1e-10 and
// positive semidefinite (eigenvalues >= -1e-10). Throws std::invalid_argument
// otherwise.
void validate_covariance(const Mat& sigma, Eigen::Index d, const std::string& context);

// Linear value encoding: the latent scoring direction plus the standard
// deviation of the unencoded residual noise.
struct ValueEncoding {
    ValueEncoding(Direction v_star_in, double sigma_eps_in);

    Direction v_star;
    double sigma_eps;
};

// Several value objectives sharing one representation space.
struct MultiValueEncoding {
    MultiValueEncoding(std::vector<Direction> v_stars_in, std::vector<double> sigma_eps_in);

    std::vector<Direction> v_stars;
    std::vector<double> sigma_eps;

    Eigen::Index dim() const { return v_stars.front().dim(); }
    std::size_t size() const { return v_stars.size(); }

    // d x m matrix with one objective direction per column.
    Mat directions_matrix() const;
};

// A judging principle, reduced to the direction it activates. The text of
// the principle is carried only as a label.
struct Constitution {
    std::string label;
    Direction v_c;
};

// Encoding quality rho = sqrt(v*' Sigma v* / (v*' Sigma v* + sigma_eps^2)),
// in [0, 1]. Sigma defaults to the identity. rho = 1 means scores are fully
// determined by the representation; rho = 0 means they are pure noise.
double encoding_quality(const ValueEncoding& enc);
double encoding_quality(const ValueEncoding& enc, const Mat& sigma);

}  // namespace rlaif
