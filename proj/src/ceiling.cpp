#include "rlaif/ceiling.hpp"

#include <cmath>
#include <numbers>

namespace rlaif {

double closed_form_regret(double rho, double sigma_s) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw std::invalid_argument("closed_form_regret: rho must be in [0, 1]");
    }
    if (!(sigma_s >= 0.0)) {
        throw std::invalid_argument("closed_form_regret: sigma_s must be >= 0");
    }
    return (1.0 - rho) * sigma_s * std::numbers::inv_sqrtpi;
}

double expected_max_two_gaussians(double sigma_s) {
    if (!(sigma_s >= 0.0)) {
        throw std::invalid_argument("expected_max_two_gaussians: sigma_s must be >= 0");
    }
    return sigma_s * std::numbers::inv_sqrtpi;
}

double selection_regret(const SelectionInstance& instance) {
    const int n = instance.n_candidates();
    if (n < 2 || static_cast<int>(instance.true_values.size()) != n) {
        throw std::invalid_argument("selection_regret: need >= 2 candidates with matching scores");
    }
    double best_truth = instance.true_values[0];
    double best_proxy = instance.proxy_values[0];
    double truth_at_best_proxy = instance.true_values[0];
    for (int i = 1; i < n; ++i) {
        if (instance.true_values[i] > best_truth) best_truth = instance.true_values[i];
        if (instance.proxy_values[i] > best_proxy) {
            best_proxy = instance.proxy_values[i];
            truth_at_best_proxy = instance.true_values[i];
        }
    }
    return best_truth - truth_at_best_proxy;
}

void draw_selection_instance(const RepresentationWorld& world, RandomStream& rng,
                             SelectionInstance& instance) {
    const double signal = world.encoding().v_star.vec().dot(world.sigma() * world.encoding().v_star.vec());
    const double sigma_p = std::sqrt(std::max(signal, 0.0));
    const double sigma_eps = world.encoding().sigma_eps;
    for (Eigen::Index i = 0; i < instance.proxy_values.size(); ++i) {
        instance.proxy_values[i] = sigma_p * rng.normal();
        instance.true_values[i] = instance.proxy_values[i] + sigma_eps * rng.normal();
    }
}

namespace {

void validate_trials(int n_candidates, std::int64_t n_trials) {
    if (n_candidates < 2) {
        throw std::invalid_argument("selection regret: n_candidates must be >= 2");
    }
    if (n_trials < 1) {
        throw std::invalid_argument("selection regret: n_trials must be >= 1");
    }
}

CeilingReport make_report(const RepresentationWorld& world, const par::MeanVar& total, int n_candidates,
                          std::int64_t n_trials) {
    return {world.rho(), world.sigma_s(), closed_form_regret(world.rho(), world.sigma_s()),
            total.mean,  total.std_error(), n_candidates,
            n_trials};
}

}  // namespace

CeilingReport simulate_selection_regret(const RepresentationWorld& world, int n_candidates,
                                        std::int64_t n_trials, std::uint64_t seed) {
    validate_trials(n_candidates, n_trials);
    auto chunks = par::map_chunks<par::MeanVar>(n_trials, [&](par::ChunkRange range) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(range.index)));
        par::MeanVar acc;
        SelectionInstance instance{Vec(n_candidates), Vec(n_candidates)};
        for (std::int64_t t = range.begin; t < range.end; ++t) {
            draw_selection_instance(world, rng, instance);
            acc.add(selection_regret(instance));
        }
        return acc;
    });
    par::MeanVar total;
    for (const auto& c : chunks) total.merge(c);
    return make_report(world, total, n_candidates, n_trials);
}

CeilingReport simulate_selection_regret_via_representations(const RepresentationWorld& world, int n_candidates,
                                                            std::int64_t n_trials, std::uint64_t seed) {
    validate_trials(n_candidates, n_trials);
    const Eigen::Index d = world.dim();
    const Mat& transform = world.sigma_sqrt();
    const Vec& v_star = world.encoding().v_star.vec();
    const double sigma_eps = world.encoding().sigma_eps;

    auto chunks = par::map_chunks<par::MeanVar>(n_trials, [&](par::ChunkRange range) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(range.index)));
        par::MeanVar acc;
        SelectionInstance instance{Vec(n_candidates), Vec(n_candidates)};
        Vec z(d), h(d);
        for (std::int64_t t = range.begin; t < range.end; ++t) {
            for (int i = 0; i < n_candidates; ++i) {
                for (Eigen::Index j = 0; j < d; ++j) z[j] = rng.normal();
                h = world.mu() + transform * z;
                // The common mean <mu, v*> shifts proxy and truth together
                // and cancels in the regret.
                instance.proxy_values[i] = h.dot(v_star);
                instance.true_values[i] = instance.proxy_values[i] + sigma_eps * rng.normal();
            }
            acc.add(selection_regret(instance));
        }
        return acc;
    });
    par::MeanVar total;
    for (const auto& c : chunks) total.merge(c);
    return make_report(world, total, n_candidates, n_trials);
}

MonteCarloEstimate conditional_winner_mean(const RepresentationWorld& world, std::int64_t n_trials,
                                           std::uint64_t seed) {
    if (n_trials < 2) {
        throw std::invalid_argument("conditional_winner_mean: n_trials must be >= 2");
    }
    const double signal = world.encoding().v_star.vec().dot(world.sigma() * world.encoding().v_star.vec());
    const double sigma_p = std::sqrt(std::max(signal, 0.0));
    const double sigma_eps = world.encoding().sigma_eps;

    auto chunks = par::map_chunks<par::MeanVar>(n_trials, [&](par::ChunkRange range) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(range.index)));
        par::MeanVar acc;
        for (std::int64_t t = range.begin; t < range.end; ++t) {
            const double p1 = sigma_p * rng.normal();
            const double s1 = p1 + sigma_eps * rng.normal();
            const double p2 = sigma_p * rng.normal();
            rng.normal();  // s2's noise, drawn to keep the stream layout uniform
            // Ties occur only for a degenerate proxy (rho = 0, P constant);
            // resolving them to the first candidate extends the identity
            // E[S1 | winner] = rho sigma_S / sqrt(pi) continuously to rho = 0.
            if (p1 >= p2) acc.add(s1);
        }
        return acc;
    });
    par::MeanVar total;
    for (const auto& c : chunks) total.merge(c);
    return {total.mean, total.std_error(), total.n};
}

std::vector<std::pair<double, double>> scaling_sweep(const std::vector<double>& rho_grid, double sigma_s) {
    std::vector<std::pair<double, double>> out;
    out.reserve(rho_grid.size());
    for (double rho : rho_grid) {
        out.emplace_back(rho, closed_form_regret(rho, sigma_s));
    }
    return out;
}

}  // namespace rlaif
