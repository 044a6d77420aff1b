#include "rlaif/preference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace rlaif {

double sigmoid(double t) {
    if (t >= 0.0) {
        return 1.0 / (1.0 + std::exp(-t));
    }
    const double e = std::exp(t);
    return e / (1.0 + e);
}

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

void format_value(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    line += buf;
    line += ' ';
}

}  // namespace

std::vector<PreferencePair> generate_preferences(const RepresentationWorld& world, const Constitution& judge,
                                                 std::int64_t n_pairs, std::uint64_t seed) {
    if (n_pairs < 1) {
        throw std::invalid_argument("generate_preferences: n_pairs must be >= 1");
    }
    if (judge.v_c.dim() != world.dim()) {
        throw std::invalid_argument("generate_preferences: judge dimension mismatch");
    }
    const Eigen::Index d = world.dim();
    const Vec v_c = judge.v_c.vec();
    const RowSampler draw = gaussian_base_sampler(world);

    std::vector<PreferencePair> pairs(static_cast<std::size_t>(n_pairs));
    par::map_chunks<int>(n_pairs, [&](par::ChunkRange range) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(range.index)));
        Vec h1(d), h2(d);
        for (std::int64_t i = range.begin; i < range.end; ++i) {
            draw(rng, h1);
            draw(rng, h2);
            const double p = sigmoid((h1 - h2).dot(v_c));
            const int label = rng.uniform() < p ? 1 : 0;
            pairs[static_cast<std::size_t>(i)] = {h1, h2, label, seed};
        }
        return 0;
    });
    return pairs;
}

void write_preferences(std::ostream& os, const std::vector<PreferencePair>& pairs) {
    std::string line;
    for (const PreferencePair& p : pairs) {
        line.clear();
        for (Eigen::Index j = 0; j < p.h1.size(); ++j) format_value(line, p.h1[j]);
        for (Eigen::Index j = 0; j < p.h2.size(); ++j) format_value(line, p.h2[j]);
        line += std::to_string(p.label);
        line += ' ';
        line += std::to_string(p.seed);
        line += '\n';
        os << line;
    }
}

std::vector<PreferencePair> read_preferences(std::istream& is) {
    std::vector<PreferencePair> pairs;
    std::string line;
    Eigen::Index d = -1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::vector<double> values;
        double v;
        while (ss >> v) values.push_back(v);
        if (d < 0) {
            if (values.size() < 4 || values.size() % 2 != 0) {
                throw std::invalid_argument("read_preferences: malformed record");
            }
            d = static_cast<Eigen::Index>((values.size() - 2) / 2);
        }
        if (values.size() != static_cast<std::size_t>(2 * d + 2)) {
            throw std::invalid_argument("read_preferences: inconsistent record length");
        }
        PreferencePair p;
        p.h1 = Eigen::Map<const Vec>(values.data(), d);
        p.h2 = Eigen::Map<const Vec>(values.data() + d, d);
        p.label = static_cast<int>(values[static_cast<std::size_t>(2 * d)]);
        p.seed = static_cast<std::uint64_t>(values[static_cast<std::size_t>(2 * d + 1)]);
        if (p.label != 0 && p.label != 1) {
            throw std::invalid_argument("read_preferences: label must be 0 or 1");
        }
        pairs.push_back(std::move(p));
    }
    return pairs;
}

FitReport fit_preference_direction(const std::vector<PreferencePair>& pairs, std::int64_t max_iters,
                                   double tol) {
    if (pairs.empty()) {
        throw std::invalid_argument("fit_preference_direction: no pairs");
    }
    const Eigen::Index d = pairs.front().h1.size();
    const auto n = static_cast<Eigen::Index>(pairs.size());
    if (n < d + 1) {
        throw std::invalid_argument("fit_preference_direction: need at least d+1 pairs");
    }

    Mat features(n, d);
    Vec labels(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const PreferencePair& p = pairs[static_cast<std::size_t>(i)];
        if (p.h1.size() != d || p.h2.size() != d) {
            throw std::invalid_argument("fit_preference_direction: inconsistent pair dimensions");
        }
        features.row(i) = (p.h1 - p.h2).transpose();
        labels[i] = static_cast<double>(p.label);
    }

    Eigen::SelfAdjointEigenSolver<Mat> es(features.transpose() * features / static_cast<double>(n),
                                          Eigen::EigenvaluesOnly);
    const double max_eig = es.eigenvalues().maxCoeff();
    if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, max_eig)) {
        throw std::invalid_argument("fit_preference_direction: features are rank-deficient");
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    // Sign-canonical forms: log sigma(t) = -softplus(-t) and
    // 1 - sigma(t) = sigma(-t). Besides being the stable way to evaluate
    // them, these make the whole fit bitwise invariant under swapping each
    // pair and flipping its label (t negates exactly, so every term maps to
    // itself). The objective is accumulated in extended precision: near the
    // optimum the per-step improvement is ~ step * ||grad||^2, which falls
    // below double resolution of the mean log-likelihood long before the
    // gradient tolerance is reached.
    auto mean_ll = [&](const Vec& b) -> long double {
        const Vec t = features * b;
        long double s = 0.0L;
        for (Eigen::Index i = 0; i < n; ++i) s -= softplus(labels[i] == 1.0 ? -t[i] : t[i]);
        return s * static_cast<long double>(inv_n);
    };
    auto mean_grad = [&](const Vec& b) -> Vec {
        const Vec t = features * b;
        Vec residual(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            residual[i] = labels[i] == 1.0 ? sigmoid(-t[i]) : -sigmoid(t[i]);
        }
        return features.transpose() * residual * inv_n;
    };

    constexpr double kArmijoC = 1e-4;
    constexpr double kSeparationNorm = 1e3;
    // A converged report promises a gradient norm of at most 1e-6, so looser
    // requests are tightened to that.
    tol = std::min(tol, 1e-6);

    Vec b = Vec::Zero(d);
    long double f = mean_ll(b);
    Vec g = mean_grad(b);
    double step = 1.0;
    std::int64_t iter = 0;
    FitStatus status = FitStatus::max_iterations;
    double best_gnorm = std::numeric_limits<double>::infinity();
    double max_bnorm = 0.0;
    int stagnant = 0;

    for (; iter < max_iters; ++iter) {
        const double gnorm = g.norm();
        if (gnorm <= tol) {
            status = FitStatus::converged;
            break;
        }
        if (b.norm() > kSeparationNorm) {
            status = FitStatus::scale_unidentifiable;
            break;
        }
        // Rounding floor: neither the gradient nor the parameter norm is
        // moving, so a tighter tolerance is unreachable at this precision.
        // Norm growth counts as progress because separated data diverges
        // slowly while the gradient barely changes.
        bool progressing = false;
        if (gnorm < 0.99 * best_gnorm) {
            best_gnorm = gnorm;
            progressing = true;
        }
        if (b.norm() > max_bnorm + 1e-3) {
            max_bnorm = b.norm();
            progressing = true;
        }
        if (progressing) {
            stagnant = 0;
        } else if (++stagnant >= 200) {
            break;
        }
        double trial = step;
        Vec b_next = b + trial * g;
        long double f_next = mean_ll(b_next);
        int backtracks = 0;
        while (f_next < f + static_cast<long double>(kArmijoC * trial * gnorm * gnorm) && backtracks < 60) {
            trial *= 0.5;
            b_next = b + trial * g;
            f_next = mean_ll(b_next);
            ++backtracks;
        }
        if (backtracks >= 60) break;  // no measurable ascent is possible
        b = std::move(b_next);
        f = f_next;
        g = mean_grad(b);
        step = std::min(trial * 2.0, 1e6);
    }

    const double scale = b.norm();
    Direction direction = scale > 1e-12 ? Direction(Vec(b / scale)) : Direction(b);
    return FitReport{std::move(direction), scale,
                     static_cast<double>(f) * static_cast<double>(n),  // total log-likelihood
                     iter, status == FitStatus::converged, status, g.norm()};
}

RlaifRound rlaif_round(const Policy& base, const Constitution& judge, std::int64_t n_pairs, double lambda,
                       std::uint64_t seed, bool fit_direction) {
    if (!fit_direction) {
        // Exact-direction round: tilt by the judge's direction itself.
        const double scale = judge.v_c.norm();
        Direction dir = scale > 1e-12 ? normalize(judge.v_c) : judge.v_c;
        FitReport report{dir, scale, std::numeric_limits<double>::quiet_NaN(), 0, true, FitStatus::converged,
                         0.0};
        return {tilt_policy(base, judge.v_c, lambda), std::move(report)};
    }
    auto pairs = generate_preferences(base.world(), judge, n_pairs, seed);
    FitReport report = fit_preference_direction(pairs);
    const Vec fitted = report.recovered_direction.vec() * report.scale;
    return {tilt_policy(base, Direction(fitted), lambda), std::move(report)};
}

}  // namespace rlaif
