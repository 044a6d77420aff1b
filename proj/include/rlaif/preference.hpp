#pragma once

#include "rlaif/gaussian_world.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace rlaif {

// One unit of synthetic constitutional feedback: two representations and a
// binary judgment. label = 1 means the first was preferred; the label is
// Bernoulli with probability sigmoid(<h1 - h2, v_c>).
struct PreferencePair {
    Vec h1;
    Vec h2;
    int label;
    std::uint64_t seed;
};

// Draws n_pairs i.i.d. candidate pairs from the world's base measure and
// labels them with the judge's direction. Deterministic under seed.
std::vector<PreferencePair> generate_preferences(const RepresentationWorld& world, const Constitution& judge,
                                                 std::int64_t n_pairs, std::uint64_t seed);

// Columnar text serialization, one pair per record:
// d values of h1, d values of h2, label, seed.
void write_preferences(std::ostream& os, const std::vector<PreferencePair>& pairs);
std::vector<PreferencePair> read_preferences(std::istream& is);

enum class FitStatus {
    converged,
    max_iterations,
    scale_unidentifiable,  // perfect separation: parameter norm exceeded 1e3
};

// Result of the logistic maximum-likelihood fit. The Bradley-Terry parameter
// is reported as a unit direction plus its norm, since downstream tilting
// uses scale * direction.
struct FitReport {
    Direction recovered_direction;
    double scale;
    double log_likelihood;  // total over pairs, at the returned parameter
    std::int64_t iterations;
    bool converged;
    FitStatus status;
    double gradient_norm;  // of the mean log-likelihood at the returned parameter
};

// Full-batch gradient ascent with Armijo backtracking (c = 1e-4, shrink 0.5)
// on the mean logistic log-likelihood, started at zero. Converged means the
// mean-log-likelihood gradient norm dropped to tol or below; tolerances much
// below 1e-6 stall because the objective improvement per step falls under
// double rounding. Single-threaded.
FitReport fit_preference_direction(const std::vector<PreferencePair>& pairs, std::int64_t max_iters = 20000,
                                   double tol = 1e-6);

struct RlaifRound {
    Policy policy;
    FitReport fit;
};

// One judgment round: generate preferences from the base policy's world,
// recover the judged direction, and tilt the policy by lambda times the
// recovered parameter (scale included). With fit_direction = false the
// judge's exact direction is used and the fit is skipped.
RlaifRound rlaif_round(const Policy& base, const Constitution& judge, std::int64_t n_pairs, double lambda,
                       std::uint64_t seed, bool fit_direction = true);

// Numerically stable logistic sigmoid.
double sigmoid(double t);

}  // namespace rlaif
