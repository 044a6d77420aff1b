#include "rlaif/improvement.hpp"

#include <chrono>
#include <cmath>

namespace rlaif {

double predict_improvement(const RepresentationWorld& world, const Direction& v_c, double lambda) {
    if (v_c.dim() != world.dim()) {
        throw std::invalid_argument("predict_improvement: dimension mismatch");
    }
    return lambda * world.encoding().v_star.vec().dot(world.sigma() * v_c.vec());
}

ImprovementReport verify_improvement(const RepresentationWorld& world, const Direction& v_c, double lambda,
                                     std::int64_t n, std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("verify_improvement: n must be >= 2");
    }
    const double prediction = predict_improvement(world, v_c, lambda);

    WorldPtr wp = std::make_shared<const RepresentationWorld>(world);
    const Policy base(wp);
    const Policy tilted = tilt_policy(base, v_c, lambda);
    const double exact_delta = closed_form_alignment(tilted) - closed_form_alignment(base);

    const MonteCarloEstimate base_mc = estimate_alignment(base, n, derive_seed(seed, 0));
    const MonteCarloEstimate tilt_mc = estimate_alignment(tilted, n, derive_seed(seed, 1));
    const double mc_delta = tilt_mc.estimate - base_mc.estimate;
    const double mc_se = std::sqrt(base_mc.std_error * base_mc.std_error + tilt_mc.std_error * tilt_mc.std_error);

    const bool significant = std::abs(mc_delta) > 4.0 * mc_se;
    const bool sign_agrees = !significant || (mc_delta > 0) == (prediction > 0);
    return {lambda, prediction, exact_delta, mc_delta, mc_se, significant, sign_agrees};
}

GapConstruction generation_judgment_gap(const CorpusMixtureModel& model, double alpha_c) {
    if (!(model.eta >= 0.0 && model.eta <= 1.0)) {
        throw std::invalid_argument("generation_judgment_gap: eta must be in [0, 1]");
    }
    if (!(alpha_c >= 0.0 && alpha_c <= 1.0)) {
        throw std::invalid_argument("generation_judgment_gap: alpha_c must be in [0, 1]");
    }
    if (model.d < 1) {
        throw std::invalid_argument("generation_judgment_gap: d must be >= 1");
    }
    if (model.d < 2 && (model.eta < 1.0 || alpha_c < 1.0)) {
        throw std::invalid_argument("generation_judgment_gap: d < 2 leaves no room for an orthogonal part");
    }

    RandomStream rng(derive_seed(model.seed, 0x6a70));
    auto unit_orthogonal_to_first_axis = [&]() {
        Vec r(model.d);
        double norm = 0.0;
        do {
            r[0] = 0.0;
            for (Eigen::Index j = 1; j < model.d; ++j) r[j] = rng.normal();
            norm = r.norm();
        } while (norm <= 1e-12);
        return Vec(r / norm);
    };
    auto build = [&](double axis_component) {
        Vec v = Vec::Zero(model.d);
        v[0] = axis_component;
        if (axis_component < 1.0) {
            v += std::sqrt(std::max(0.0, 1.0 - axis_component * axis_component)) * unit_orthogonal_to_first_axis();
        }
        return Direction(v);
    };

    Direction w = build(model.eta);
    Direction v_c = build(alpha_c);
    return {alpha_c - model.eta, std::move(w), std::move(v_c)};
}

ExperimentResult run_toy_example() { return run_toy_example(424242); }

ExperimentResult run_toy_example(std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult result;
    result.kind = "toy";
    result.seed = seed;
    result.config_echo = "{\"kind\":\"toy\",\"seed\":" + std::to_string(seed) + "}";

    const Direction v_star{1.0, 0.0};
    const Direction w{0.1, 0.995};
    const Direction v_c{0.95, 0.31};
    const Direction v_adv{-0.8, 0.6};
    const double lambda = 1.0;

    WorldPtr world = RepresentationWorld::create(Vec::Zero(2), Mat::Identity(2, 2), ValueEncoding(v_star, 0.0));

    result.add_scalar("w_dot_vstar", alignment_correlation(w, v_star));
    result.check_close("w_dot_vstar", alignment_correlation(w, v_star), 0.1, 1e-12);
    result.add_scalar("vc_dot_vstar", alignment_correlation(v_c, v_star));
    result.check_close("vc_dot_vstar", alignment_correlation(v_c, v_star), 0.95, 1e-12);

    const Policy base(world, w);
    const Policy improved = tilt_policy(base, v_c, lambda);
    const Vec& w_prime = improved.score_direction().vec();
    result.add_scalar("w_prime_0", w_prime[0]);
    result.add_scalar("w_prime_1", w_prime[1]);
    result.check_close("w_prime_0", w_prime[0], 1.05, 1e-12);
    result.check_close("w_prime_1", w_prime[1], 1.305, 1e-12);

    const Direction w_prime_unit = normalize(improved.score_direction());
    result.add_scalar("w_prime_normalized_0", w_prime_unit[0]);
    result.add_scalar("w_prime_normalized_1", w_prime_unit[1]);
    result.check_close("w_prime_normalized_0", w_prime_unit[0], 0.63, 0.005);
    result.check_close("w_prime_normalized_1", w_prime_unit[1], 0.78, 0.005);
    result.add_scalar("w_prime_unit_dot_vstar", alignment_correlation(w_prime_unit, v_star));
    result.check_close("w_prime_unit_dot_vstar", alignment_correlation(w_prime_unit, v_star), 0.63, 0.005);

    const Policy degraded = tilt_policy(base, v_adv, lambda);
    const Vec& w_dd = degraded.score_direction().vec();
    result.add_scalar("w_doubleprime_0", w_dd[0]);
    result.add_scalar("w_doubleprime_1", w_dd[1]);
    result.check_close("w_doubleprime_0", w_dd[0], -0.7, 1e-12);
    result.check_close("w_doubleprime_1", w_dd[1], 1.595, 1e-12);

    const Direction w_dd_unit = normalize(degraded.score_direction());
    result.add_scalar("w_doubleprime_normalized_0", w_dd_unit[0]);
    result.add_scalar("w_doubleprime_normalized_1", w_dd_unit[1]);
    result.check_close("w_doubleprime_normalized_0", w_dd_unit[0], -0.40, 0.005);
    result.check_close("w_doubleprime_normalized_1", w_dd_unit[1], 0.92, 0.005);
    result.add_scalar("w_doubleprime_unit_dot_vstar", alignment_correlation(w_dd_unit, v_star));
    result.check_close("w_doubleprime_unit_dot_vstar", alignment_correlation(w_dd_unit, v_star), -0.40, 0.005);

    const double delta = predict_improvement(*world, v_c, lambda);
    const double delta_adv = predict_improvement(*world, v_adv, lambda);
    result.add_scalar("predicted_delta", delta);
    result.check_close("predicted_delta", delta, 0.95, 1e-12);
    result.add_scalar("predicted_delta_adversarial", delta_adv);
    result.check_close("predicted_delta_adversarial", delta_adv, -0.8, 1e-12);

    // Monte Carlo confirmation of both alignment changes.
    const std::int64_t n = 200000;
    const MonteCarloEstimate base_mc = estimate_alignment(base, n, derive_seed(result.seed, 1));
    const MonteCarloEstimate improved_mc = estimate_alignment(improved, n, derive_seed(result.seed, 2));
    const MonteCarloEstimate degraded_mc = estimate_alignment(degraded, n, derive_seed(result.seed, 3));
    const double se2 = std::sqrt(base_mc.std_error * base_mc.std_error + improved_mc.std_error * improved_mc.std_error);
    const double se3 = std::sqrt(base_mc.std_error * base_mc.std_error + degraded_mc.std_error * degraded_mc.std_error);
    const double mc_gain = improved_mc.estimate - base_mc.estimate;
    const double mc_drop = degraded_mc.estimate - base_mc.estimate;
    result.add_scalar("mc_alignment_gain", mc_gain, se2);
    result.check_close("mc_alignment_gain", mc_gain, 0.95, 4.0 * se2, "Monte Carlo, 4 std errors");
    result.add_scalar("mc_alignment_drop", mc_drop, se3);
    result.check_close("mc_alignment_drop", mc_drop, -0.8, 4.0 * se3, "Monte Carlo, 4 std errors");

    result.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace rlaif
