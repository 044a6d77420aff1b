#pragma once

#include "rlaif/gaussian_world.hpp"
#include "rlaif/result.hpp"

namespace rlaif {

// Comparison of the first-order alignment-change prediction against the exact
// Gaussian value and a Monte Carlo measurement. `sign_agrees` is meaningful
// only when `significant` (|mc_delta| > 4 std errors); it is set true
// otherwise.
struct ImprovementReport {
    double lambda;
    double first_order_prediction;  // lambda * v*' Sigma v_c, computed without sampling
    double exact_delta;             // closed-form alignment difference of the tilted Gaussians
    double mc_delta;
    double mc_std_error;
    bool significant;
    bool sign_agrees;
};

// First-order alignment change of a tilt along v_c: lambda * v*' Sigma v_c.
// For a Gaussian base this is the exact change, not just first order.
double predict_improvement(const RepresentationWorld& world, const Direction& v_c, double lambda);

// Checks the prediction two ways: against the closed-form tilted mean and
// against a two-sided Monte Carlo alignment estimate with n draws per policy.
ImprovementReport verify_improvement(const RepresentationWorld& world, const Direction& v_c, double lambda,
                                     std::int64_t n, std::uint64_t seed);

// Mixture model of a pretraining corpus: fraction eta of the generation
// signal is value-relevant, the rest lies in a random direction orthogonal
// to the value direction.
struct CorpusMixtureModel {
    double eta;
    Eigen::Index d;
    std::uint64_t seed;
};

struct GapConstruction {
    double gap;  // alpha_c - eta
    Direction w;
    Direction v_c;
};

// Builds unit directions w and v_c with <w, v*> = eta and <v_c, v*> = alpha_c
// exactly, v* being the first coordinate axis; the orthogonal remainders are
// randomized by the model seed. The gap alpha_c - eta is how much better
// judgment reads the value direction than generation does.
GapConstruction generation_judgment_gap(const CorpusMixtureModel& model, double alpha_c);

// Reproduces the built-in two-dimensional walkthrough: a mostly value-blind
// generation direction, a well-aligned judge, one helpful tilt and one
// adversarial tilt, with every printed value checked in closed form and the
// two alignment changes confirmed by Monte Carlo.
ExperimentResult run_toy_example();
ExperimentResult run_toy_example(std::uint64_t seed);

}  // namespace rlaif
