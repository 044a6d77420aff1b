#pragma once

#include "rlaif/gaussian_world.hpp"

#include <utility>
#include <vector>

namespace rlaif {

// Expected regret of choosing between two candidates by a proxy that
// correlates rho with the true score: (1 - rho) * sigma_s / sqrt(pi).
double closed_form_regret(double rho, double sigma_s);

// E[max(S1, S2)] for i.i.d. S_i ~ N(0, sigma_s^2): sigma_s / sqrt(pi).
double expected_max_two_gaussians(double sigma_s);

// One noisy-selection trial: proxy scores P_i = <h_i, v*> and true scores
// S_i = P_i + eps_i for each candidate. In population Corr(P_i, S_i) equals
// the world's encoding quality.
struct SelectionInstance {
    Vec proxy_values;
    Vec true_values;
    int n_candidates() const { return static_cast<int>(proxy_values.size()); }
};

// Regret of picking by proxy instead of by truth: max_i S_i - S_{argmax P}.
// Proxy ties resolve to the earliest candidate (they occur only when the
// proxy is degenerate).
double selection_regret(const SelectionInstance& instance);

struct CeilingReport {
    double rho;
    double sigma_s;
    double closed_form;  // two-candidate value; reported for any n_candidates
    double mc_regret;
    double mc_std_error;
    int n_candidates;
    std::int64_t n_trials;
};

// Fills an instance straight from the bivariate normal with the world's
// correlation, bypassing representation draws.
void draw_selection_instance(const RepresentationWorld& world, RandomStream& rng,
                             SelectionInstance& instance);

// Monte Carlo selection regret: per trial, draws a SelectionInstance and
// accumulates E[max_i S_i] - E[S at argmax proxy]. The instances come
// straight from the bivariate normal, isolating the selection math from the
// representation sampler; see simulate_selection_regret_via_representations
// for the cross-check that goes through full representation draws.
CeilingReport simulate_selection_regret(const RepresentationWorld& world, int n_candidates,
                                        std::int64_t n_trials, std::uint64_t seed);

// Same regret, but each candidate is a full representation draw h with proxy
// <h, v*> and truth <h, v*> + eps.
CeilingReport simulate_selection_regret_via_representations(const RepresentationWorld& world, int n_candidates,
                                                            std::int64_t n_trials, std::uint64_t seed);

// Monte Carlo estimate of E[S1 | P1 > P2], which equals rho * sigma_s / sqrt(pi).
MonteCarloEstimate conditional_winner_mean(const RepresentationWorld& world, std::int64_t n_trials,
                                           std::uint64_t seed);

// (rho, (1 - rho) * sigma_s / sqrt(pi)) per grid point; the gap is affine and
// strictly decreasing in rho.
std::vector<std::pair<double, double>> scaling_sweep(const std::vector<double>& rho_grid, double sigma_s);

}  // namespace rlaif
