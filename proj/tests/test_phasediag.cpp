#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "dicke4/phasediag.hpp"
#include "test_helpers.hpp"

using namespace dicke4;

TEST_CASE("parameter paths") {
    auto c = testutil::n_config(0.65, 0.25, 0.5);
    CHECK(get_param(c, "mu.24") == 0.5);
    CHECK(get_param(c, "omega.3") == 1.0);
    CHECK(get_param(c, "Omega.2") == 0.25);
    apply_param(c, "mu.24", 1.3);
    CHECK(c.mu_at(2, 4) == 1.3);

    CHECK_THROWS_AS(get_param(c, "mu.34"), Error);  // not an N coupling
    CHECK_THROWS_AS(get_param(c, "omega.5"), Error);
    CHECK_THROWS_AS(get_param(c, "nonsense"), Error);
    CHECK_THROWS_AS(get_param(c, "mu"), Error);
}

TEST_CASE("variational scan crosses S_13 -> S_24 between 1.16 and 1.17") {
    ScanSpec spec;
    spec.base = testutil::n_config(0.65, 0.25, 0.5);
    spec.path = "mu.24";
    spec.lo = 0.9;
    spec.hi = 1.4;
    spec.steps = 26;
    auto rows = scan_1d(spec);
    REQUIRE(rows.size() == 26);

    double last13 = 0.0, first24 = 2.0;
    for (const auto& row : rows) {
        REQUIRE(row.error.empty());
        REQUIRE(row.region.has_value());
        if (*row.region == Region::S13) last13 = std::max(last13, row.param);
        if (*row.region == Region::S24) first24 = std::min(first24, row.param);
    }
    CHECK(last13 < first24);
    CHECK(last13 > 1.1);
    CHECK(first24 < 1.22);

    // deterministic: identical rerun
    auto rows2 = scan_1d(spec);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].param == rows2[i].param);
        CHECK(rows[i].obs.energy == rows2[i].obs.energy);
    }
}

TEST_CASE("quantum scan rows carry observables and convergence metadata") {
    ScanSpec spec;
    spec.base = testutil::lambda_config(0.25, 0.0, 0.25);
    spec.path = "mu.23";
    spec.lo = 0.0;
    spec.hi = 1.2;
    spec.steps = 4;
    spec.method = ScanMethod::Quantum;
    spec.quantum.tol = 1e-7;
    auto rows = scan_1d(spec);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        REQUIRE(row.error.empty());
        CHECK_FALSE(row.region.has_value());
        CHECK(row.quantum_converged);
        CHECK(row.m_max >= 10);
        CHECK(row.obs.A[0] + row.obs.A[1] + row.obs.A[2] + row.obs.A[3] ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(row.obs.nu2 < 1e-2);  // Omega_2 stays dark along this cut
    }
}

TEST_CASE("scan records per-point errors and continues") {
    ScanSpec spec;
    spec.base = testutil::lambda_config(0.25, 0.6, 0.25);
    spec.path = "omega.2";  // pushing omega_2 above omega_3 breaks the ordering
    spec.lo = 0.0;
    spec.hi = 2.0;
    spec.steps = 5;
    auto rows = scan_1d(spec);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].error.empty());           // omega_2 = 0: equal detuning
    CHECK_FALSE(rows[4].error.empty());     // omega_2 = 2 > omega_3
    int failed = 0;
    for (const auto& row : rows) failed += row.error.empty() ? 0 : 1;
    CHECK(failed >= 1);
    CHECK(failed <= 4);
}

TEST_CASE("2-D grid reproduces the normal-region boundary curve") {
    GridSpec spec;
    spec.base = testutil::lambda_config(0.0, 0.0, 0.0);
    spec.path_p = "mu.13";
    spec.path_q = "mu.23";
    spec.p_lo = 0.0;
    spec.p_hi = 1.0;
    spec.p_steps = 21;
    spec.q_lo = 0.0;
    spec.q_hi = 1.0;
    spec.q_steps = 21;
    auto rows = grid_2d(spec);
    REQUIRE(rows.size() == 21 * 21);

    // row-major order
    CHECK(rows[0].p == 0.0);
    CHECK(rows[0].q == 0.0);
    CHECK(rows[1].p == 0.0);
    CHECK(rows[1].q == doctest::Approx(0.05));
    CHECK(rows[21].p == doctest::Approx(0.05));

    // away from the separatrix the label follows the sign of 4(mu13^2+mu23^2) - 1.1
    const double cell = 0.05;
    for (const auto& row : rows) {
        REQUIRE(row.error.empty());
        double f = 4.0 * (row.p * row.p + row.q * row.q) - 1.1;
        double margin = 8.0 * std::max(row.p, row.q) * cell;  // |grad f| * cell
        if (f < -margin) CHECK(row.region == Region::Norm);
        if (f > margin) {
            bool collective = row.region == Region::SLambda || row.region == Region::S23;
            CHECK(collective);
        }
    }

    // the all-zero corner is normal
    CHECK(rows[0].region == Region::Norm);
}

TEST_CASE("grid over (mu13, mu24) shows the three N-configuration labels") {
    GridSpec spec;
    spec.base = testutil::n_config(0.0, 0.25, 0.0);
    spec.path_p = "mu.13";
    spec.path_q = "mu.24";
    spec.p_lo = 0.0;
    spec.p_hi = 1.5;
    spec.p_steps = 16;
    spec.q_lo = 0.0;
    spec.q_hi = 1.5;
    spec.q_steps = 16;
    auto rows = grid_2d(spec);
    std::set<Region> seen;
    for (const auto& row : rows) {
        REQUIRE(row.error.empty());
        seen.insert(row.region);
    }
    CHECK(seen.count(Region::Norm) == 1);
    CHECK(seen.count(Region::S13) == 1);
    CHECK(seen.count(Region::S24) == 1);
    // with mu23 = 0.25 the S_23 energy is 0.64 > E_norm = 0: it never wins
    CHECK(seen.count(Region::S23) == 0);
}

TEST_CASE("a region can be valid long before it wins the minimum") {
    // S_34 exists (its 2-level reduction binds) once 4 mu34^2 >= omega43 Omega2,
    // i.e. from mu34 = sqrt(0.0125), but its energy only drops below E_norm at
    // the Maxwell root of E_34 = omega_1.
    double onset = std::sqrt(0.2 * 0.25 / 4.0);
    auto just_valid = testutil::lambda_config(0.1, 0.0, onset + 1e-3);
    auto energies = region_energies(just_valid);
    CHECK(energies[Region::S34].valid);
    CHECK(energies[Region::S34].energy > 1.0);  // still near omega_3
    CHECK(classify(just_valid).label == Region::Norm);

    auto c = testutil::lambda_config(0.1, 0.0, 0.3);
    double win = separatrix_root(c, Region::Norm, Region::S34, "mu.34", 0.3, 0.8);
    // root of 1.1 = (4y - 0.05)^2/(4y), y = mu34^2
    double y = (4.8 + std::sqrt(4.8 * 4.8 - 4 * 16 * 0.0025)) / 32.0;
    CHECK(win == doctest::Approx(std::sqrt(y)).epsilon(1e-8));
    CHECK(win > 4 * onset);
}

TEST_CASE("quantum grids are supported for small meshes") {
    GridSpec spec;
    spec.base = testutil::n_config(0.65, 0.25, 0.5);
    spec.path_p = "mu.13";
    spec.path_q = "mu.24";
    spec.p_lo = 0.1;
    spec.p_hi = 0.7;
    spec.p_steps = 2;
    spec.q_lo = 0.1;
    spec.q_hi = 0.7;
    spec.q_steps = 2;
    spec.method = ScanMethod::Quantum;
    spec.quantum.tol = 1e-6;
    auto rows = grid_2d(spec);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        REQUIRE(row.error.empty());
        CHECK(row.energy <= 1e-12);  // ground energy never exceeds E_norm = 0
    }
}

TEST_CASE("separatrix roots match the closed-form boundary curves") {
    // lambda: E_norm = E_Lambda at 4(mu13^2 + mu23^2) = omega31 Omega1
    auto lam = testutil::lambda_config(0.25, 0.0, 0.25);
    double root = separatrix_root(lam, Region::Norm, Region::SLambda, "mu.23", 0.1, 0.8);
    CHECK(root == doctest::Approx(std::sqrt(1.1 / 4.0 - 0.0625)).epsilon(1e-8));

    // N: E_norm = E_13 at 4 mu13^2 = omega31 Omega1 = 1
    auto nc = testutil::n_config(0.3, 0.25, 0.5);
    double root13 = separatrix_root(nc, Region::Norm, Region::S13, "mu.13", 0.2, 0.9);
    CHECK(root13 == doctest::Approx(0.5).epsilon(1e-8));

    // N: Maxwell set E_13 = E_24 for mu13 = 0.65
    auto ncb = testutil::n_config(0.65, 0.25, 0.5);
    double root24 = separatrix_root(ncb, Region::S13, Region::S24, "mu.24", 0.9, 1.4);
    CHECK(root24 > 1.16);
    CHECK(root24 < 1.17);

    // same ordering at both ends: no bracket
    CHECK_THROWS_AS(separatrix_root(ncb, Region::S13, Region::S24, "mu.24", 0.9, 1.0), Error);
}

TEST_CASE("transition orders match the Maxwell-set / bifurcation split") {
    SUBCASE("second order: normal <-> S_Lambda under equal detuning") {
        auto c = testutil::lambda_config(0.25, 0.0, 0.25);
        double b = separatrix_root(c, Region::Norm, Region::SLambda, "mu.23", 0.1, 0.8);
        auto rec = transition_order(c, b, "mu.23");
        CHECK(rec.order == TransitionOrder::Second);
        CHECK(rec.jump < 1e-2);
        CHECK(rec.left == Region::Norm);
        CHECK(rec.right == Region::SLambda);
    }
    SUBCASE("second order: normal <-> S_13") {
        auto c = testutil::n_config(0.3, 0.25, 0.5);
        double b = separatrix_root(c, Region::Norm, Region::S13, "mu.13", 0.2, 0.9);
        auto rec = transition_order(c, b, "mu.13");
        CHECK(rec.order == TransitionOrder::Second);
    }
    SUBCASE("first order: normal <-> S_34") {
        auto c = testutil::lambda_config(0.1, 0.1, 0.3);
        double b = separatrix_root(c, Region::Norm, Region::S34, "mu.34", 0.3, 0.8);
        auto rec = transition_order(c, b, "mu.34");
        CHECK(rec.order == TransitionOrder::First);
        CHECK(rec.jump > 1e-2);
    }
    SUBCASE("first order: S_Lambda <-> S_34") {
        auto c = testutil::lambda_config(0.25, 0.6, 0.3);
        double b = separatrix_root(c, Region::SLambda, Region::S34, "mu.34", 0.3, 0.8);
        auto rec = transition_order(c, b, "mu.34");
        CHECK(rec.order == TransitionOrder::First);
        CHECK(rec.left == Region::SLambda);
        CHECK(rec.right == Region::S34);
    }
    SUBCASE("first order: N S_norm <-> S_23") {
        // other channels kept below their existence thresholds
        auto c = testutil::n_config(0.3, 0.25, 0.4);
        double b = separatrix_root(c, Region::Norm, Region::S23, "mu.23", 0.3, 0.6);
        // root of 0.8 = (4y - 0.05)^2/(4y), y = mu23^2
        double y = (3.6 + std::sqrt(3.6 * 3.6 - 4 * 16 * 0.0025)) / 32.0;
        CHECK(b == doctest::Approx(std::sqrt(y)).epsilon(1e-8));
        CHECK(transition_order(c, b, "mu.23").order == TransitionOrder::First);
    }
    SUBCASE("first order: N S_norm <-> S_24") {
        auto c = testutil::n_config(0.3, 0.1, 0.5);
        double b = separatrix_root(c, Region::Norm, Region::S24, "mu.24", 0.6, 1.3);
        // root of 0.8 = (4y - 1.1)^2/(16y), y = mu24^2
        double y = (21.6 + std::sqrt(21.6 * 21.6 - 4 * 16 * 1.21)) / 32.0;
        CHECK(b == doctest::Approx(std::sqrt(y)).epsilon(1e-8));
        CHECK(transition_order(c, b, "mu.24").order == TransitionOrder::First);
    }
    SUBCASE("first order: N S_23 <-> S_24 (mode exchange)") {
        auto c = testutil::n_config(0.3, 0.6, 0.5);
        double b = separatrix_root(c, Region::S23, Region::S24, "mu.24", 1.0, 1.5);
        auto rec = transition_order(c, b, "mu.24");
        CHECK(rec.order == TransitionOrder::First);
        CHECK(rec.left == Region::S23);
        CHECK(rec.right == Region::S24);
    }
    SUBCASE("first order: S_13 <-> S_24, jumps in nu1 and the subsystem populations") {
        auto c = testutil::n_config(0.65, 0.25, 0.5);
        double b = separatrix_root(c, Region::S13, Region::S24, "mu.24", 0.9, 1.4);
        auto rec = transition_order(c, b, "mu.24");
        CHECK(rec.order == TransitionOrder::First);

        auto left = observables(testutil::n_config(0.65, 0.25, b - 1e-4), Region::S13);
        auto right = observables(testutil::n_config(0.65, 0.25, b + 1e-4), Region::S24);
        CHECK(std::abs(right.nu1 - left.nu1) > 1e-2);
        CHECK(left.A[0] + left.A[2] > 0.99);
        CHECK(right.A[1] + right.A[3] > 0.99);
    }
}
