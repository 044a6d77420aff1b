#include "rlaif/nonlinear.hpp"

#include <cmath>

namespace rlaif {

namespace {

// Bivariate streaming moments with deterministic pairwise merging.
struct BiMoments {
    std::int64_t n = 0;
    double mean_f = 0.0, mean_g = 0.0;
    double m2_f = 0.0, m2_g = 0.0, c_fg = 0.0;

    void add(double f, double g) {
        ++n;
        const double inv = 1.0 / static_cast<double>(n);
        const double df = f - mean_f;
        const double dg = g - mean_g;
        mean_f += df * inv;
        mean_g += dg * inv;
        m2_f += df * (f - mean_f);
        m2_g += dg * (g - mean_g);
        c_fg += df * (g - mean_g);
    }

    void merge(const BiMoments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
        const double total = na + nb;
        const double df = o.mean_f - mean_f;
        const double dg = o.mean_g - mean_g;
        mean_f += df * nb / total;
        mean_g += dg * nb / total;
        m2_f += o.m2_f + df * df * na * nb / total;
        m2_g += o.m2_g + dg * dg * na * nb / total;
        c_fg += o.c_fg + df * dg * na * nb / total;
        n += o.n;
    }

    double covariance() const { return n > 1 ? c_fg / static_cast<double>(n - 1) : 0.0; }
    double var_f() const { return n > 1 ? m2_f / static_cast<double>(n - 1) : 0.0; }
    double var_g() const { return n > 1 ? m2_g / static_cast<double>(n - 1) : 0.0; }
};

// Chunks large enough to act as batch-means replicas.
constexpr std::int64_t kMinReplicaSize = 8;

double replica_std_error(const std::vector<double>& stats) {
    if (stats.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    return par::batch_means_std_error(stats);
}

}  // namespace

SafetyFunction::SafetyFunction(Kind kind, Direction v, double param)
    : kind_(kind), v_(std::move(v)), param_(param) {}

SafetyFunction SafetyFunction::linear(Direction v) { return SafetyFunction(Kind::linear, std::move(v), 0.0); }

SafetyFunction SafetyFunction::quadratic(Direction v, double tau) {
    if (!std::isfinite(tau)) {
        throw std::invalid_argument("SafetyFunction::quadratic: tau must be finite");
    }
    return SafetyFunction(Kind::quadratic, std::move(v), tau);
}

SafetyFunction SafetyFunction::smooth_saturating(Direction v, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument("SafetyFunction::smooth_saturating: scale must be positive");
    }
    return SafetyFunction(Kind::smooth_saturating, std::move(v), scale);
}

double SafetyFunction::value(const Vec& h) const {
    const double t = h.dot(v_.vec());
    switch (kind_) {
        case Kind::linear:
            return t;
        case Kind::quadratic: {
            const double r = t - param_;
            return -r * r;
        }
        case Kind::smooth_saturating:
            return param_ * std::tanh(t / param_);
    }
    return 0.0;
}

Vec SafetyFunction::gradient(const Vec& h) const {
    const double t = h.dot(v_.vec());
    switch (kind_) {
        case Kind::linear:
            return v_.vec();
        case Kind::quadratic:
            return -2.0 * (t - param_) * v_.vec();
        case Kind::smooth_saturating: {
            const double th = std::tanh(t / param_);
            return (1.0 - th * th) * v_.vec();
        }
    }
    return Vec::Zero(v_.dim());
}

std::string SafetyFunction::describe() const {
    switch (kind_) {
        case Kind::linear:
            return "linear";
        case Kind::quadratic:
            return "quadratic(tau=" + std::to_string(param_) + ")";
        case Kind::smooth_saturating:
            return "smooth_saturating(scale=" + std::to_string(param_) + ")";
    }
    return "?";
}

PromptableFamily::PromptableFamily(std::vector<Member> members_in) : members(std::move(members_in)) {
    if (members.empty()) {
        throw std::invalid_argument("PromptableFamily: must be nonempty");
    }
    const Eigen::Index d = members.front().function.dim();
    for (const Member& m : members) {
        if (m.function.dim() != d) {
            throw std::invalid_argument("PromptableFamily: members must share one dimension");
        }
    }
}

CovarianceImprovement covariance_improvement(const RepresentationWorld& world, const SafetyFunction& f,
                                             const Direction& v_c, double lambda, std::int64_t n,
                                             std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("covariance_improvement: n must be >= 2");
    }
    if (f.dim() != world.dim() || v_c.dim() != world.dim()) {
        throw std::invalid_argument("covariance_improvement: dimension mismatch");
    }
    const RowSampler draw = gaussian_base_sampler(world);
    const Eigen::Index d = world.dim();
    const Vec dir = v_c.vec();

    struct ChunkStats {
        BiMoments fs;
        par::TiltAccumulator tilt;
        std::int64_t count = 0;
    };
    auto chunks = par::map_chunks<ChunkStats>(n, [&](par::ChunkRange range) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(range.index)));
        ChunkStats st;
        Vec h(d);
        for (std::int64_t i = range.begin; i < range.end; ++i) {
            draw(rng, h);
            const double fv = f.value(h);
            const double s = h.dot(dir);
            st.fs.add(fv, s);
            st.tilt.add(lambda * s, fv);
        }
        st.count = range.count();
        return st;
    });

    BiMoments fs;
    par::TiltAccumulator tilt;
    std::vector<double> cov_replicas, remainder_replicas;
    for (const auto& c : chunks) {
        fs.merge(c.fs);
        tilt.merge(c.tilt);
        if (c.count >= kMinReplicaSize) {
            const double chunk_cov = c.fs.covariance();
            cov_replicas.push_back(chunk_cov);
            remainder_replicas.push_back(c.tilt.estimate() - c.fs.mean_f - lambda * chunk_cov);
        }
    }

    const double prediction = lambda * fs.covariance();
    const double mc_delta = tilt.estimate() - fs.mean_f;
    const double mean_f_se = std::sqrt(fs.var_f() / static_cast<double>(fs.n));
    const double mc_se = std::sqrt(tilt.std_error() * tilt.std_error() + mean_f_se * mean_f_se);
    if (!std::isfinite(mc_delta)) {
        throw std::runtime_error("covariance_improvement: non-finite tilt estimate; reduce lambda");
    }
    return {prediction, std::abs(lambda) * replica_std_error(cov_replicas), mc_delta, mc_se,
            replica_std_error(remainder_replicas)};
}

GradientEstimate stein_direction(const RepresentationWorld& world, const SafetyFunction& f, std::int64_t n,
                                 std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("stein_direction: n must be >= 2");
    }
    if (f.dim() != world.dim()) {
        throw std::invalid_argument("stein_direction: dimension mismatch");
    }
    const Eigen::Index d = world.dim();
    const RowSampler draw = gaussian_base_sampler(world);

    // Gradient sanity check against central finite differences before
    // trusting the analytic form in the estimate.
    {
        RandomStream rng(derive_seed(seed, 0xfd));
        constexpr double kStep = 1e-5;
        Vec h(d), fd(d);
        for (int p = 0; p < 10; ++p) {
            draw(rng, h);
            const Vec analytic = f.gradient(h);
            for (Eigen::Index j = 0; j < d; ++j) {
                Vec hp = h, hm = h;
                hp[j] += kStep;
                hm[j] -= kStep;
                fd[j] = (f.value(hp) - f.value(hm)) / (2.0 * kStep);
            }
            if ((fd - analytic).norm() > 1e-4 * std::max(1.0, analytic.norm())) {
                throw std::runtime_error("stein_direction: analytic gradient disagrees with finite differences");
            }
        }
    }

    struct VecMoments {
        std::int64_t n = 0;
        Vec mean, m2;
        void init(Eigen::Index d) {
            mean = Vec::Zero(d);
            m2 = Vec::Zero(d);
        }
        void add(const Vec& x) {
            ++n;
            const double inv = 1.0 / static_cast<double>(n);
            for (Eigen::Index j = 0; j < x.size(); ++j) {
                const double delta = x[j] - mean[j];
                mean[j] += delta * inv;
                m2[j] += delta * (x[j] - mean[j]);
            }
        }
        void merge(const VecMoments& o) {
            if (o.n == 0) return;
            if (n == 0) {
                *this = o;
                return;
            }
            const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
            const double total = na + nb;
            for (Eigen::Index j = 0; j < mean.size(); ++j) {
                const double delta = o.mean[j] - mean[j];
                mean[j] += delta * nb / total;
                m2[j] += o.m2[j] + delta * delta * na * nb / total;
            }
            n += o.n;
        }
    };

    auto chunks = par::map_chunks<VecMoments>(n, [&](par::ChunkRange range) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(range.index)));
        VecMoments acc;
        acc.init(d);
        Vec h(d);
        for (std::int64_t i = range.begin; i < range.end; ++i) {
            draw(rng, h);
            acc.add(f.gradient(h));
        }
        return acc;
    });
    VecMoments total;
    for (const auto& c : chunks) total.merge(c);

    Vec se(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        se[j] = total.n > 1
                    ? std::sqrt(total.m2[j] / static_cast<double>(total.n - 1) / static_cast<double>(total.n))
                    : std::numeric_limits<double>::quiet_NaN();
    }
    return {total.mean, se, total.n};
}

SteinIdentityCheck verify_stein_identity(const RepresentationWorld& world, const SafetyFunction& f,
                                         const Direction& v_c, std::int64_t n, std::uint64_t seed) {
    if (v_c.dim() != world.dim() || f.dim() != world.dim()) {
        throw std::invalid_argument("verify_stein_identity: dimension mismatch");
    }
    const Vec dir = v_c.vec();
    const Vec sigma_vc = world.sigma() * dir;

    // Independent seeds for the two sides, so the comparison carries no
    // shared-sample correlation.
    const CovarianceEstimate lhs = base_covariance(
        world, [&](const Vec& h) { return f.value(h); }, [&](const Vec& h) { return h.dot(dir); }, n,
        derive_seed(seed, 101));

    const Eigen::Index d = world.dim();
    const RowSampler draw = gaussian_base_sampler(world);
    auto chunks = par::map_chunks<par::MeanVar>(n, [&](par::ChunkRange range) {
        RandomStream rng(derive_seed(derive_seed(seed, 202), static_cast<std::uint64_t>(range.index)));
        par::MeanVar acc;
        Vec h(d);
        for (std::int64_t i = range.begin; i < range.end; ++i) {
            draw(rng, h);
            acc.add(sigma_vc.dot(f.gradient(h)));
        }
        return acc;
    });
    par::MeanVar rhs;
    for (const auto& c : chunks) rhs.merge(c);

    const double combined = std::sqrt(lhs.std_error * lhs.std_error + rhs.std_error() * rhs.std_error());
    const bool agree = std::abs(lhs.covariance - rhs.mean) <= 4.0 * combined;
    return {lhs.covariance, lhs.std_error, rhs.mean, rhs.std_error(), agree};
}

std::vector<NonMonotoneProbePoint> non_monotone_probe(const Direction& v, double tau,
                                                      const std::vector<Vec>& mu_grid) {
    if (mu_grid.empty()) {
        throw std::invalid_argument("non_monotone_probe: empty grid");
    }
    std::vector<NonMonotoneProbePoint> out;
    out.reserve(mu_grid.size());
    for (const Vec& mu : mu_grid) {
        if (mu.size() != v.dim()) {
            throw std::invalid_argument("non_monotone_probe: grid dimension mismatch");
        }
        const double coefficient = -2.0 * (mu.dot(v.vec()) - tau);
        const int sign = (coefficient > 0.0) - (coefficient < 0.0);
        out.push_back({mu, coefficient, sign});
    }
    return out;
}

PromptableCeiling promptable_ceiling(const RepresentationWorld& world, const SafetyFunction& f,
                                     const PromptableFamily& family, std::int64_t n, std::uint64_t seed) {
    if (family.members.empty()) {
        throw std::invalid_argument("promptable_ceiling: family must be nonempty");
    }
    if (f.dim() != world.dim() || family.dim() != world.dim()) {
        throw std::invalid_argument("promptable_ceiling: dimension mismatch");
    }
    if (n < 2) {
        throw std::invalid_argument("promptable_ceiling: n must be >= 2");
    }
    const Eigen::Index d = world.dim();
    const std::size_t m = family.members.size();
    const RowSampler draw = gaussian_base_sampler(world);

    struct ChunkStats {
        std::vector<BiMoments> per_member;
        std::int64_t count = 0;
    };
    auto chunks = par::map_chunks<ChunkStats>(n, [&](par::ChunkRange range) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(range.index)));
        ChunkStats st;
        st.per_member.resize(m);
        Vec h(d);
        for (std::int64_t i = range.begin; i < range.end; ++i) {
            draw(rng, h);
            const double fv = f.value(h);
            for (std::size_t j = 0; j < m; ++j) {
                st.per_member[j].add(fv, family.members[j].function.value(h));
            }
        }
        st.count = range.count();
        return st;
    });

    std::vector<BiMoments> totals(m);
    std::vector<std::vector<double>> replicas(m);
    for (const auto& c : chunks) {
        for (std::size_t j = 0; j < m; ++j) {
            totals[j].merge(c.per_member[j]);
            if (c.count >= kMinReplicaSize) replicas[j].push_back(c.per_member[j].covariance());
        }
    }

    PromptableCeiling out;
    out.covariances.resize(m);
    double max_std_g = 0.0;
    std::size_t best = 0;
    for (std::size_t j = 0; j < m; ++j) {
        out.covariances[j] = totals[j].covariance();
        max_std_g = std::max(max_std_g, std::sqrt(totals[j].var_g()));
        if (out.covariances[j] > out.covariances[best]) best = j;
    }
    out.best_label = family.members[best].label;
    out.best_cov = out.covariances[best];
    out.best_cov_std_error = replica_std_error(replicas[best]);
    out.cauchy_schwarz_bound = std::sqrt(totals[best].var_f()) * max_std_g;
    const double slack = std::isfinite(out.best_cov_std_error) ? 4.0 * out.best_cov_std_error : 0.0;
    if (out.best_cov > out.cauchy_schwarz_bound + slack) {
        throw std::logic_error("promptable_ceiling: covariance exceeded the Cauchy-Schwarz bound");
    }
    return out;
}

CovarianceEstimate base_covariance(const RepresentationWorld& world, const std::function<double(const Vec&)>& f,
                                   const std::function<double(const Vec&)>& g, std::int64_t n,
                                   std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("base_covariance: n must be >= 2");
    }
    const Eigen::Index d = world.dim();
    const RowSampler draw = gaussian_base_sampler(world);

    struct ChunkStats {
        BiMoments fg;
        std::int64_t count = 0;
    };
    auto chunks = par::map_chunks<ChunkStats>(n, [&](par::ChunkRange range) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(range.index)));
        ChunkStats st;
        Vec h(d);
        for (std::int64_t i = range.begin; i < range.end; ++i) {
            draw(rng, h);
            st.fg.add(f(h), g(h));
        }
        st.count = range.count();
        return st;
    });

    BiMoments total;
    std::vector<double> replicas;
    for (const auto& c : chunks) {
        total.merge(c.fg);
        if (c.count >= kMinReplicaSize) replicas.push_back(c.fg.covariance());
    }
    return {total.covariance(), replica_std_error(replicas), total.n};
}

}  // namespace rlaif
