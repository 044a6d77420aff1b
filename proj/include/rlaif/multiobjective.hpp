#pragma once

#include "rlaif/linear_model.hpp"

#include <vector>

namespace rlaif {

// Per-objective first-order alignment changes of a tilt along v_c:
// lambda * V' Sigma v_c, one entry per objective. Exact for a Gaussian base.
Vec per_objective_deltas(const MultiValueEncoding& values, const Mat& sigma, const Direction& v_c,
                         double lambda);

enum class TradeoffClass {
    pareto_improving,   // every delta positive
    trade_off_inducing, // mixed signs
    pareto_degrading,   // every delta negative
    boundary,           // at least one exact zero
};

struct TradeoffProfile {
    std::vector<int> signs;
    TradeoffClass classification;
};

TradeoffProfile classify_tradeoff(const Vec& deltas);

// Whether Sigma * v_c improves every objective strictly. Zeros count as
// violations (boundary directions are not Pareto-improving).
struct ConeMembership {
    bool is_pareto;
    std::vector<int> violated;  // indices of objectives with <Sigma v_c, v_i> <= 0
};

ConeMembership pareto_cone_membership(const std::vector<Direction>& v_stars, const Mat& sigma,
                                      const Direction& v_c);
ConeMembership pareto_cone_membership(const std::vector<Direction>& v_stars, const Direction& v_c);

// Feasibility of {d : <d, v_i> > 0 for all i}, decided through the minimum-
// norm point of the convex hull of the objective directions:
//   - hull clear of zero  -> witness d with <d, v_i> >= 1 for all i
//   - zero in the hull    -> simplex weights alpha with ||sum alpha_i v_i|| <= 1e-8
//   - in between          -> degenerate, reported explicitly rather than guessed
enum class ConeStatus { nonempty, empty, degenerate };

struct ConeCertificate {
    ConeStatus status;
    Vec witness;       // nonempty case: V' witness >= 1 componentwise
    Vec weights;       // empty case: convex weights certifying 0 in the hull
    double min_norm;   // distance from 0 to the hull
};

ConeCertificate cone_emptiness(const std::vector<Direction>& v_stars);

// Minimum-norm point of conv(columns of V), solved exactly by enumerating
// simplex faces. Intended for small m (hard cap 16 columns).
struct MinNormPoint {
    Vec weights;  // simplex weights over the columns
    Vec point;    // V * weights
    double norm;
};

MinNormPoint min_norm_in_hull(const Mat& v_columns);

// Angular width of the two-objective Pareto cone under an isotropic base:
// pi - angle(v_help, v_harm), clamped to [0, pi].
double two_objective_cone_width(const Direction& v_help, const Direction& v_harm);

// Direction maximizing the weighted first-order improvement sum_i alpha_i
// <Sigma v_c, v_i> over unit v_c: normalize(Sigma V alpha). Weights must be
// strictly positive; a vanishing resultant (perfectly balanced opposed
// objectives) raises.
Direction optimal_weighted_constitution(const std::vector<Direction>& v_stars, const Vec& alpha,
                                        const Mat& sigma);

}  // namespace rlaif
