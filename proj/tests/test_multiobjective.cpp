#include "rlaif/multiobjective.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace rlaif;

namespace {

Vec random_unit(std::mt19937_64& rng, Eigen::Index d) {
    std::normal_distribution<double> normal;
    Vec v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = normal(rng);
    return v / v.norm();
}

// Dense grid search over the unit sphere (d <= 3): is there a direction with
// strictly positive inner product against every objective?
bool grid_search_cone_nonempty(const std::vector<Direction>& objectives) {
    const Eigen::Index d = objectives.front().dim();
    auto feasible = [&](const Vec& u) {
        for (const Direction& v : objectives) {
            if (u.dot(v.vec()) <= 1e-6) return false;
        }
        return true;
    };
    if (d == 2) {
        for (int i = 0; i < 5000; ++i) {
            const double phi = 2.0 * std::numbers::pi * i / 5000.0;
            Vec u(2);
            u << std::cos(phi), std::sin(phi);
            if (feasible(u)) return true;
        }
        return false;
    }
    for (int i = 0; i < 200; ++i) {
        const double z = -1.0 + 2.0 * (i + 0.5) / 200.0;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int j = 0; j < 200; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / 200.0;
            Vec u(3);
            u << r * std::cos(phi), r * std::sin(phi), z;
            if (feasible(u)) return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("per-objective deltas: single objective reduces to the scalar prediction") {
    const MultiValueEncoding values({Direction{1.0, 0.0}}, {0.0});
    const Vec deltas = per_objective_deltas(values, Mat::Identity(2, 2), Direction{0.95, 0.31}, 1.0);
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0] == doctest::Approx(0.95).epsilon(1e-15));
}

TEST_CASE("per-objective deltas: orthonormal pair under a diagonal tilt") {
    const MultiValueEncoding values({Direction{1.0, 0.0}, Direction{0.0, 1.0}}, {0.0, 0.0});
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Vec deltas =
        per_objective_deltas(values, Mat::Identity(2, 2), Direction{inv_sqrt2, inv_sqrt2}, 1.0);
    CHECK(deltas[0] == doctest::Approx(0.7071067812).epsilon(1e-9));
    CHECK(deltas[1] == doctest::Approx(0.7071067812).epsilon(1e-9));
}

TEST_CASE("per-objective deltas: opposed objectives get exactly opposite deltas") {
    const MultiValueEncoding values({Direction{0.6, 0.8}, Direction{-0.6, -0.8}}, {0.0, 0.0});
    Mat sigma(2, 2);
    sigma << 1.3, 0.2, 0.2, 0.7;
    const Vec deltas = per_objective_deltas(values, sigma, Direction{0.3, -0.9}, 0.7);
    CHECK(deltas[0] == doctest::Approx(-deltas[1]).epsilon(1e-15));
}

TEST_CASE("trade-off classification covers all four classes") {
    Vec improving(2);
    improving << 0.2, 0.4;
    CHECK(classify_tradeoff(improving).classification == TradeoffClass::pareto_improving);

    Vec mixed(3);
    mixed << 0.2, -0.1, 0.4;
    const TradeoffProfile profile = classify_tradeoff(mixed);
    CHECK(profile.classification == TradeoffClass::trade_off_inducing);
    CHECK(profile.signs == std::vector<int>{1, -1, 1});

    Vec degrading(2);
    degrading << -0.2, -0.4;
    CHECK(classify_tradeoff(degrading).classification == TradeoffClass::pareto_degrading);

    Vec boundary(2);
    boundary << 0.0, 0.4;
    CHECK(classify_tradeoff(boundary).classification == TradeoffClass::boundary);
}

TEST_CASE("pareto cone membership in the first quadrant") {
    const std::vector<Direction> objectives = {Direction{1.0, 0.0}, Direction{0.0, 1.0}};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    const ConeMembership inside = pareto_cone_membership(objectives, Direction{inv_sqrt2, inv_sqrt2});
    CHECK(inside.is_pareto);
    CHECK(inside.violated.empty());

    const ConeMembership outside = pareto_cone_membership(objectives, normalize(Direction{1.0, -0.1}));
    CHECK_FALSE(outside.is_pareto);
    REQUIRE(outside.violated.size() == 1);
    CHECK(outside.violated[0] == 1);

    // Boundary directions (zero inner product) are violations.
    const ConeMembership boundary = pareto_cone_membership(objectives, Direction{1.0, 0.0});
    CHECK_FALSE(boundary.is_pareto);
}

TEST_CASE("opposed objectives admit no improving direction") {
    const std::vector<Direction> opposed = {Direction{0.6, 0.8}, Direction{-0.6, -0.8}};
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        CHECK_FALSE(pareto_cone_membership(opposed, Direction(random_unit(rng, 2))).is_pareto);
    }
    const ConeCertificate cert = cone_emptiness(opposed);
    CHECK(cert.status == ConeStatus::empty);
    CHECK(cert.weights[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(cert.weights[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("orthogonal pair yields a unit-margin witness") {
    const std::vector<Direction> objectives = {Direction{1.0, 0.0}, Direction{0.0, 1.0}};
    const ConeCertificate cert = cone_emptiness(objectives);
    REQUIRE(cert.status == ConeStatus::nonempty);
    CHECK(cert.witness.dot(objectives[0].vec()) >= 1.0 - 1e-9);
    CHECK(cert.witness.dot(objectives[1].vec()) >= 1.0 - 1e-9);
    // Here the min-norm point is (1/2, 1/2), so the witness is (1, 1).
    CHECK(cert.witness[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cert.witness[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("symmetric trine certifies emptiness with uniform weights") {
    const std::vector<Direction> trine = {Direction{1.0, 0.0}, Direction{-0.5, std::sqrt(3.0) / 2.0},
                                          Direction{-0.5, -std::sqrt(3.0) / 2.0}};
    const ConeCertificate cert = cone_emptiness(trine);
    REQUIRE(cert.status == ConeStatus::empty);
    for (int i = 0; i < 3; ++i) CHECK(cert.weights[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK_FALSE(grid_search_cone_nonempty(trine));
}

TEST_CASE("cone_emptiness agrees with dense grid search on small instances") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index d = 2 + static_cast<Eigen::Index>(trial % 2);
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % 2);
        std::vector<Direction> objectives;
        for (Eigen::Index k = 0; k < m; ++k) objectives.emplace_back(random_unit(rng, d));
        const ConeCertificate cert = cone_emptiness(objectives);
        if (cert.status == ConeStatus::degenerate) continue;  // grid search cannot resolve these
        CHECK((cert.status == ConeStatus::nonempty) == grid_search_cone_nonempty(objectives));
    }
}

TEST_CASE("gordan dichotomy with verified certificates on random instances") {
    std::mt19937_64 rng(777);
    int empties = 0, nonempties = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const bool construct_empty = (trial % 2) == 1;
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % 4);
        std::vector<Direction> objectives;
        Eigen::Index d;
        if (construct_empty) {
            d = 2 + static_cast<Eigen::Index>(rng() % 7);
            Vec combo = Vec::Zero(d);
            for (Eigen::Index k = 0; k + 1 < m; ++k) {
                Vec u = random_unit(rng, d);
                combo += (0.2 + 0.8 * std::uniform_real_distribution<double>()(rng)) * u;
                objectives.emplace_back(std::move(u));
            }
            objectives.emplace_back(Vec(-combo / combo.norm()));
        } else {
            d = m + static_cast<Eigen::Index>(rng() % (8 - m + 1));
            for (Eigen::Index k = 0; k < m; ++k) objectives.emplace_back(random_unit(rng, d));
        }

        const ConeCertificate cert = cone_emptiness(objectives);
        if (cert.status == ConeStatus::empty) {
            ++empties;
            CHECK(construct_empty);
            double sum = 0.0;
            Vec resultant = Vec::Zero(d);
            for (Eigen::Index k = 0; k < cert.weights.size(); ++k) {
                CHECK(cert.weights[k] >= -1e-12);
                sum += cert.weights[k];
                resultant += cert.weights[k] * objectives[static_cast<std::size_t>(k)].vec();
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(resultant.norm() <= 1e-8);
        } else if (cert.status == ConeStatus::nonempty) {
            ++nonempties;
            CHECK_FALSE(construct_empty);
            for (const Direction& obj : objectives) {
                CHECK(obj.vec().dot(cert.witness) >= 1.0 - 1e-9);
            }
            CHECK(pareto_cone_membership(objectives, Direction(cert.witness)).is_pareto);
        } else {
            FAIL("degenerate outcome on a clean instance");
        }
    }
    CHECK(empties == 100);
    CHECK(nonempties == 100);
}

TEST_CASE("cone_emptiness rejects zero objectives and oversized instances") {
    CHECK_THROWS_AS(cone_emptiness({Direction{0.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(cone_emptiness({}), std::invalid_argument);
    std::vector<Direction> too_many;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 17; ++i) too_many.emplace_back(random_unit(rng, 3));
    CHECK_THROWS_AS(cone_emptiness(too_many), std::invalid_argument);
}

TEST_CASE("two-objective cone width formula") {
    const Direction help{1.0, 0.0};
    auto at_angle = [](double theta) { return Direction{std::cos(theta), std::sin(theta)}; };

    CHECK(two_objective_cone_width(help, at_angle(std::numbers::pi / 2)) ==
          doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    CHECK(two_objective_cone_width(help, at_angle(std::numbers::pi)) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(two_objective_cone_width(help, at_angle(std::numbers::pi / 3)) ==
          doctest::Approx(2.0 * std::numbers::pi / 3).epsilon(1e-12));
    CHECK_THROWS_AS(two_objective_cone_width(help, Direction{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("cone width matches the rejection-sampled pareto fraction") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uniform;
    const double theta = std::numbers::pi / 3.0;
    const Direction help{1.0, 0.0};
    const Direction harm{std::cos(theta), std::sin(theta)};
    const std::vector<Direction> objectives = {help, harm};

    const long n = 1000000;
    long hits = 0;
    for (long i = 0; i < n; ++i) {
        const double phi = 2.0 * std::numbers::pi * uniform(rng);
        Vec u(2);
        u << std::cos(phi), std::sin(phi);
        if (u.dot(help.vec()) > 0.0 && u.dot(harm.vec()) > 0.0) ++hits;
    }
    const double fraction = static_cast<double>(hits) / static_cast<double>(n);
    const double predicted = two_objective_cone_width(help, harm) / (2.0 * std::numbers::pi);
    CHECK(std::abs(fraction - predicted) < 0.003);
}

TEST_CASE("optimal weighted constitution closed forms") {
    // Single objective: normalize(sigma v*).
    Mat sigma(2, 2);
    sigma << 2.0, 0.0, 0.0, 1.0;
    Vec alpha1(1);
    alpha1 << 1.0;
    const Direction single = optimal_weighted_constitution({Direction{1.0, 1.0}}, alpha1, sigma);
    const Vec expected1 = Vec(sigma * Vec(Vec::Ones(2))).normalized();
    CHECK((single.vec() - expected1).norm() <= 1e-12);

    // Orthonormal objectives, equal weights, isotropic base.
    Vec alpha2(2);
    alpha2 << 1.0, 1.0;
    const Direction equal = optimal_weighted_constitution({Direction{1.0, 0.0}, Direction{0.0, 1.0}},
                                                          alpha2, Mat::Identity(2, 2));
    CHECK(equal[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(equal[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    // Weights (2, 1): direction (2, 1) / sqrt(5).
    Vec alpha3(2);
    alpha3 << 2.0, 1.0;
    const Direction weighted = optimal_weighted_constitution({Direction{1.0, 0.0}, Direction{0.0, 1.0}},
                                                             alpha3, Mat::Identity(2, 2));
    CHECK(weighted[0] == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-12));
    CHECK(weighted[1] == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("optimal weighted constitution beats random unit directions") {
    std::mt19937_64 rng(2026);
    for (int trial = 0; trial < 3; ++trial) {
        const Eigen::Index d = 3 + trial;
        const Eigen::Index m = 2 + (trial % 2);
        std::vector<Direction> objectives;
        Mat v(d, m);
        for (Eigen::Index k = 0; k < m; ++k) {
            objectives.emplace_back(random_unit(rng, d));
            v.col(k) = objectives.back().vec();
        }
        Vec alpha(m);
        for (Eigen::Index k = 0; k < m; ++k) alpha[k] = 0.5 + std::uniform_real_distribution<double>()(rng);
        Mat a(d, d);
        std::normal_distribution<double> normal;
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) a(r, c) = normal(rng);
        }
        Mat sigma = a * a.transpose() / static_cast<double>(d) + 0.1 * Mat::Identity(d, d);
        sigma = ((sigma + sigma.transpose()) * 0.5).eval();

        const Direction best = optimal_weighted_constitution(objectives, alpha, sigma);
        const Vec target = sigma * (v * alpha);
        const double best_value = best.vec().dot(target);
        for (int r = 0; r < 10000; ++r) {
            CHECK(random_unit(rng, d).dot(target) <= best_value + 1e-9);
        }
    }
}

TEST_CASE("optimal weighted constitution rejects bad weights and cancellations") {
    Vec alpha(2);
    alpha << 1.0, 0.0;
    CHECK_THROWS_AS(
        optimal_weighted_constitution({Direction{1.0, 0.0}, Direction{0.0, 1.0}}, alpha, Mat::Identity(2, 2)),
        std::invalid_argument);

    Vec balanced(2);
    balanced << 1.0, 1.0;
    CHECK_THROWS_AS(
        optimal_weighted_constitution({Direction{1.0, 0.0}, Direction{-1.0, 0.0}}, balanced,
                                      Mat::Identity(2, 2)),
        std::invalid_argument);
}

TEST_CASE("every nonempty-cone witness passes membership under the identity") {
    std::mt19937_64 rng(424);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % 3);
        const Eigen::Index d = m + 2;
        std::vector<Direction> objectives;
        for (Eigen::Index k = 0; k < m; ++k) objectives.emplace_back(random_unit(rng, d));
        const ConeCertificate cert = cone_emptiness(objectives);
        if (cert.status != ConeStatus::nonempty) continue;
        CHECK(pareto_cone_membership(objectives, Direction(cert.witness)).is_pareto);
    }
}
