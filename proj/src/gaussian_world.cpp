#include "rlaif/gaussian_world.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace rlaif {

namespace {

Mat symmetric_sqrt(const Mat& sigma) {
    Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
    Vec lambda = es.eigenvalues();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < 0.0) lambda[i] = 0.0;  // clip [-1e-10, 0); anything worse was rejected
    }
    return es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

RepresentationWorld::RepresentationWorld(Vec mu, Mat sigma, ValueEncoding encoding)
    : mu_(std::move(mu)), sigma_(std::move(sigma)), encoding_(std::move(encoding)) {
    if (mu_.size() < 1) {
        throw std::invalid_argument("RepresentationWorld: dimension must be >= 1");
    }
    if (!mu_.allFinite()) {
        throw std::invalid_argument("RepresentationWorld: mu has non-finite entries");
    }
    validate_covariance(sigma_, mu_.size(), "RepresentationWorld");
    if (encoding_.v_star.dim() != mu_.size()) {
        throw std::invalid_argument("RepresentationWorld: encoding dimension mismatch");
    }
    sigma_sqrt_ = symmetric_sqrt(sigma_);
}

WorldPtr RepresentationWorld::create(Vec mu, Mat sigma, ValueEncoding encoding) {
    return std::make_shared<const RepresentationWorld>(std::move(mu), std::move(sigma), std::move(encoding));
}

double RepresentationWorld::rho() const { return rlaif::encoding_quality(encoding_, sigma_); }

double RepresentationWorld::sigma_s() const {
    const double signal = encoding_.v_star.vec().dot(sigma_ * encoding_.v_star.vec());
    return std::sqrt(std::max(signal, 0.0) + encoding_.sigma_eps * encoding_.sigma_eps);
}

Policy::Policy(WorldPtr world) : world_(std::move(world)), score_direction_(Vec::Zero(world_->dim())) {}

Policy::Policy(WorldPtr world, Direction score_direction)
    : world_(std::move(world)), score_direction_(std::move(score_direction)) {
    if (score_direction_.dim() != world_->dim()) {
        throw std::invalid_argument("Policy: score direction dimension mismatch");
    }
}

Policy tilt_policy(const Policy& base, const Direction& direction, double lambda) {
    if (direction.dim() != base.world().dim()) {
        throw std::invalid_argument("tilt_policy: direction dimension mismatch");
    }
    if (!std::isfinite(lambda)) {
        throw std::invalid_argument("tilt_policy: lambda must be finite");
    }
    return Policy(base.world_ptr(), Direction(base.score_direction().vec() + lambda * direction.vec()));
}

TiltedMoments tilted_gaussian_moments(const RepresentationWorld& world, const Direction& u) {
    if (u.dim() != world.dim()) {
        throw std::invalid_argument("tilted_gaussian_moments: dimension mismatch");
    }
    return {world.mu() + world.sigma() * u.vec(), world.sigma()};
}

SampleBatch sample_policy(const Policy& policy, std::int64_t n, std::uint64_t seed) {
    if (n < 1) {
        throw std::invalid_argument("sample_policy: n must be >= 1");
    }
    const RepresentationWorld& world = policy.world();
    const Eigen::Index d = world.dim();
    const TiltedMoments moments = tilted_gaussian_moments(world, policy.score_direction());
    const Mat& transform = world.sigma_sqrt();
    const Vec& v_star = world.encoding().v_star.vec();
    const double sigma_eps = world.encoding().sigma_eps;

    SampleBatch batch;
    batch.representations.resize(n, d);
    batch.safety_scores.resize(n);
    batch.seed = seed;

    par::map_chunks<int>(n, [&](par::ChunkRange range) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(range.index)));
        Vec z(d);
        for (std::int64_t i = range.begin; i < range.end; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) z[j] = rng.normal();
            batch.representations.row(i) = (moments.mean + transform * z).transpose();
            batch.safety_scores[i] = batch.representations.row(i).dot(v_star) + sigma_eps * rng.normal();
        }
        return 0;
    });
    return batch;
}

MonteCarloEstimate estimate_alignment(const Policy& policy, std::int64_t n, std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("estimate_alignment: n must be >= 2");
    }
    const RepresentationWorld& world = policy.world();
    const Eigen::Index d = world.dim();
    const TiltedMoments moments = tilted_gaussian_moments(world, policy.score_direction());
    const Mat& transform = world.sigma_sqrt();
    const Vec& v_star = world.encoding().v_star.vec();
    const double sigma_eps = world.encoding().sigma_eps;

    // Same per-row draw order as sample_policy, so the two agree bit-for-bit
    // on a shared seed.
    auto chunks = par::map_chunks<par::MeanVar>(n, [&](par::ChunkRange range) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(range.index)));
        par::MeanVar acc;
        Vec z(d), h(d);
        for (std::int64_t i = range.begin; i < range.end; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) z[j] = rng.normal();
            h = moments.mean + transform * z;
            acc.add(h.dot(v_star) + sigma_eps * rng.normal());
        }
        return acc;
    });
    par::MeanVar total;
    for (const auto& c : chunks) total.merge(c);
    return {total.mean, total.std_error(), total.n};
}

double closed_form_alignment(const Policy& policy) {
    const TiltedMoments moments = tilted_gaussian_moments(policy.world(), policy.score_direction());
    return moments.mean.dot(policy.world().encoding().v_star.vec());
}

RowSampler gaussian_base_sampler(const RepresentationWorld& world) {
    const Vec mean = world.mu();
    const Mat transform = world.sigma_sqrt();
    const Eigen::Index d = world.dim();
    return [mean, transform, d](RandomStream& rng, Eigen::Ref<Vec> out) {
        Vec z(d);
        for (Eigen::Index j = 0; j < d; ++j) z[j] = rng.normal();
        out = mean + transform * z;
    };
}

MonteCarloEstimate importance_tilt_expectation(const RowSampler& base_sampler, Eigen::Index dim,
                                               const Direction& u, double lambda,
                                               const std::function<double(const Vec&)>& phi,
                                               std::int64_t n, std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("importance_tilt_expectation: n must be >= 2");
    }
    if (u.dim() != dim) {
        throw std::invalid_argument("importance_tilt_expectation: dimension mismatch");
    }
    if (!std::isfinite(lambda)) {
        throw std::invalid_argument("importance_tilt_expectation: lambda must be finite");
    }
    const Vec dir = u.vec();

    auto chunks = par::map_chunks<par::TiltAccumulator>(n, [&](par::ChunkRange range) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(range.index)));
        par::TiltAccumulator acc;
        Vec h(dim);
        for (std::int64_t i = range.begin; i < range.end; ++i) {
            base_sampler(rng, h);
            acc.add(lambda * h.dot(dir), phi(h));
        }
        return acc;
    });
    par::TiltAccumulator total;
    for (const auto& c : chunks) total.merge(c);

    const double estimate = total.estimate();
    const double std_error = total.std_error();
    if (!std::isfinite(estimate) || !std::isfinite(std_error)) {
        throw std::runtime_error(
            "importance_tilt_expectation: non-finite estimate; reduce lambda or center the scores");
    }
    return {estimate, std_error, total.n};
}

}  // namespace rlaif
