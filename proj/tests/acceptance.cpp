// Acceptance gate: one test case per criterion, each driving the bundled
// experiment configs end to end and asserting the published tolerances.
// Prints exactly one [PASS]/[FAIL] line per criterion.

#include "rlaif/experiments.hpp"

#include <doctest.h>

#include <cstdio>
#include <map>
#include <string>

using namespace rlaif;

namespace {

// Each bundled config runs once; criteria sharing an experiment reuse it.
const ExperimentResult& suite_result(const std::string& name) {
    static std::map<std::string, ExperimentResult> cache;
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    for (const BuiltinConfig& entry : builtin_suite()) {
        if (entry.name == name) {
            const ExperimentConfig config = parse_config(nlohmann::json::parse(entry.json_text));
            return cache.emplace(name, run_experiment(config)).first->second;
        }
    }
    throw std::logic_error("no bundled config named " + name);
}

const CheckResult& find_check(const ExperimentResult& result, const std::string& name) {
    for (const CheckResult& c : result.checks) {
        if (c.name == name) return c;
    }
    throw std::logic_error("missing check " + name + " in " + result.kind);
}

double find_scalar(const ExperimentResult& result, const std::string& name) {
    for (const NamedScalar& s : result.scalars) {
        if (s.name == name) return s.value;
    }
    throw std::logic_error("missing scalar " + name + " in " + result.kind);
}

bool checks_with_prefix_pass(const ExperimentResult& result, const std::string& prefix, int min_count) {
    int count = 0;
    bool ok = true;
    for (const CheckResult& c : result.checks) {
        if (c.name.rfind(prefix, 0) == 0) {
            ++count;
            ok &= c.passed;
        }
    }
    return ok && count >= min_count;
}

struct CriterionLine {
    int number;
    std::string title;
    bool ok = true;
    double seconds = 0.0;

    void require(bool condition) { ok = ok && condition; }
    ~CriterionLine() {
        std::printf("[%s] criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", number, title.c_str(), seconds);
        std::fflush(stdout);
    }
};

}  // namespace

TEST_CASE("criterion 1: toy example reproduction") {
    CriterionLine line{1, "toy example reproduction"};
    const ExperimentResult& toy = suite_result("toy");
    line.seconds = toy.duration_seconds;

    // Exact closed-form quantities.
    for (const char* name : {"w_dot_vstar", "vc_dot_vstar", "w_prime_0", "w_prime_1", "w_doubleprime_0",
                             "w_doubleprime_1", "predicted_delta", "predicted_delta_adversarial"}) {
        const CheckResult& c = find_check(toy, name);
        CHECK_MESSAGE(c.passed, name);
        CHECK(c.tolerance <= 1e-12);
        line.require(c.passed);
    }
    // Normalized coordinates at +-0.005.
    for (const char* name :
         {"w_prime_normalized_0", "w_prime_normalized_1", "w_prime_unit_dot_vstar",
          "w_doubleprime_normalized_0", "w_doubleprime_normalized_1", "w_doubleprime_unit_dot_vstar"}) {
        const CheckResult& c = find_check(toy, name);
        CHECK_MESSAGE(c.passed, name);
        CHECK(c.tolerance == 0.005);
        line.require(c.passed);
    }
    // Monte Carlo confirmations of both alignment changes.
    line.require(find_check(toy, "mc_alignment_gain").passed);
    line.require(find_check(toy, "mc_alignment_drop").passed);
    CHECK(find_check(toy, "mc_alignment_gain").passed);
    CHECK(find_check(toy, "mc_alignment_drop").passed);

    CHECK(toy.duration_seconds < 1.0);
    line.require(toy.duration_seconds < 1.0);
}

TEST_CASE("criterion 2: first-order improvement on random Gaussian worlds") {
    CriterionLine line{2, "first-order improvement verified on 100 random worlds"};
    const ExperimentResult& improve = suite_result("improve_worlds");
    line.seconds = improve.duration_seconds;

    CHECK(find_scalar(improve, "n_worlds") == 100.0);
    const CheckResult& closed = find_check(improve, "closed_form_equals_first_order");
    CHECK(closed.passed);
    CHECK(closed.tolerance == 1e-10);
    const CheckResult& mc = find_check(improve, "mc_within_4se_all");
    CHECK(mc.passed);
    const CheckResult& sign = find_check(improve, "sign_characterization");
    CHECK(sign.passed);
    CHECK(improve.duration_seconds < 60.0);

    line.require(closed.passed && mc.passed && sign.passed && improve.duration_seconds < 60.0);
}

TEST_CASE("criterion 3: selection-regret ceiling") {
    CriterionLine line{3, "selection regret matches (1-rho) sigma_S / sqrt(pi)"};
    const ExperimentResult& ceiling = suite_result("ceiling");
    line.seconds = ceiling.duration_seconds;

    bool ok = checks_with_prefix_pass(ceiling, "regret_rho_", 5);
    for (const CheckResult& c : ceiling.checks) {
        if (c.name.rfind("regret_rho_", 0) == 0) CHECK(c.tolerance == 0.002);
    }
    const CheckResult& emax = find_check(ceiling, "expected_max_formula");
    CHECK(emax.passed);
    CHECK(emax.tolerance == 0.0005);
    ok &= emax.passed;
    ok &= find_check(ceiling, "expected_max_mc").passed;
    ok &= checks_with_prefix_pass(ceiling, "conditional_identity_", 5);
    ok &= find_check(ceiling, "regret_zero_exact_rho_1").passed;
    CHECK(ok);
    CHECK(ceiling.duration_seconds < 30.0);
    line.require(ok && ceiling.duration_seconds < 30.0);
}

TEST_CASE("criterion 4: Gaussian covariance identity for nonlinear safety functions") {
    CriterionLine line{4, "covariance identity, 10 random worlds, both nonlinear kinds"};
    const ExperimentResult& stein = suite_result("stein");
    line.seconds = stein.duration_seconds;

    const bool identity = find_check(stein, "stein_identity_all_agree").passed;
    const bool gradients = find_check(stein, "analytic_gradients_match_fd").passed;
    CHECK(identity);
    CHECK(gradients);
    line.require(identity && gradients);
}

TEST_CASE("criterion 5: second-order remainder of the covariance prediction") {
    CriterionLine line{5, "remainder bounded for quadratic f, zero for linear f"};
    const ExperimentResult& stein = suite_result("stein");
    line.seconds = stein.duration_seconds;

    const bool bounded = find_check(stein, "remainder_ratio_bounded").passed;
    const bool linear_zero = find_check(stein, "linear_remainder_zero").passed;
    CHECK(bounded);
    CHECK(linear_zero);
    line.require(bounded && linear_zero);
}

TEST_CASE("criterion 6: non-monotone value functions defeat fixed tilts") {
    CriterionLine line{6, "gradient sign flips at the peak; +v tilt degrades above it"};
    const ExperimentResult& nonmono = suite_result("nonmonotone");
    line.seconds = nonmono.duration_seconds;

    const bool flip = find_check(nonmono, "coefficient_sign_flips_at_tau").passed;
    const bool degrades = find_check(nonmono, "degrades_above_peak").passed;
    const bool improves = find_check(nonmono, "improves_below_peak").passed;
    CHECK(flip);
    CHECK(degrades);
    CHECK(improves);
    line.require(flip && degrades && improves);
}

TEST_CASE("criterion 7: Pareto cone geometry and certificates") {
    CriterionLine line{7, "Gordan dichotomy, trine weights, cone widths, optimal weighting"};
    const ExperimentResult& pareto = suite_result("pareto");
    line.seconds = pareto.duration_seconds;

    bool ok = find_check(pareto, "gordan_dichotomy").passed;
    ok &= find_check(pareto, "gordan_certificates_verify").passed;
    const CheckResult& trine = find_check(pareto, "trine_weights_uniform");
    CHECK(trine.tolerance == 1e-6);
    ok &= trine.passed;
    ok &= checks_with_prefix_pass(pareto, "rejection_fraction_theta_", 3);
    for (const CheckResult& c : pareto.checks) {
        if (c.name.rfind("rejection_fraction_theta_", 0) == 0) CHECK(c.tolerance == 0.003);
    }
    ok &= find_check(pareto, "optimal_weighted_never_beaten").passed;
    CHECK(ok);
    line.require(ok);
}

TEST_CASE("criterion 8: adversarial constitutions degrade alignment") {
    CriterionLine line{8, "constructed adversary hits -0.8 and degrades measurably"};
    const ExperimentResult& adv = suite_result("adversarial");
    line.seconds = adv.duration_seconds;

    bool ok = find_check(adv, "toy_adversary_dot_vstar").passed;
    ok &= find_check(adv, "toy_mc_degradation").passed;
    ok &= find_check(adv, "toy_degradation_significant").passed;
    ok &= find_check(adv, "adversary_exists_in_full_space").passed;
    ok &= find_check(adv, "degradation_sign_correct").passed;
    CHECK(ok);
    line.require(ok);
}

TEST_CASE("criterion 9: preference recovery closes the loop") {
    CriterionLine line{9, "logistic MLE within 2 degrees; >= 90% of the exact gain"};
    const ExperimentResult& recovery = suite_result("improve_recovery");
    line.seconds = recovery.duration_seconds;

    const CheckResult& angle = find_check(recovery, "recovered_angle_degrees");
    CHECK(angle.passed);
    CHECK(angle.tolerance == 2.0);
    const double ratio = find_scalar(recovery, "gain_ratio");
    CHECK(ratio >= 0.9);
    const bool converged = find_check(recovery, "fit_converged").passed;
    CHECK(converged);
    line.require(angle.passed && ratio >= 0.9 && converged);
}

TEST_CASE("criterion 10: spectrum measurements") {
    CriterionLine line{10, "participation ratio, Parseval, low-rank concentration"};
    const ExperimentResult& spectrum = suite_result("spectrum");
    line.seconds = spectrum.duration_seconds;

    bool ok = find_check(spectrum, "d_eff_isotropic_6").passed;
    ok &= find_check(spectrum, "d_eff_rank_one").passed;
    ok &= find_check(spectrum, "d_eff_2_1_1").passed;
    const CheckResult& parseval = find_check(spectrum, "parseval_full_sum");
    CHECK(parseval.tolerance == 1e-8);
    ok &= parseval.passed;
    ok &= find_check(spectrum, "parseval_random_world").passed;
    const double concentration = find_scalar(spectrum, "concentration_at_k_target");
    CHECK(concentration >= 0.999);
    ok &= concentration >= 0.999;
    CHECK(ok);
    line.require(ok);
}
