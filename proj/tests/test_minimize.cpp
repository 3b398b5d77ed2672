#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dicke4/minimize.hpp"

using namespace dicke4;

TEST_CASE("nelder_mead finds the minimum of a shifted quadratic") {
    auto f = [](const Eigen::VectorXd& x) {
        return (x[0] - 1.5) * (x[0] - 1.5) + 2.0 * (x[1] + 0.5) * (x[1] + 0.5) + 3.0;
    };
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -10.0);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, 10.0);
    auto res = nelder_mead(f, x0, lo, hi);
    CHECK(res.converged);
    CHECK(res.f == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(res.x[0] == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(res.x[1] == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("nelder_mead handles a narrow valley") {
    auto rosen = [](const Eigen::VectorXd& x) {
        double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    Eigen::VectorXd x0(2);
    x0 << -1.2, 1.0;
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -5.0);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, 5.0);
    NelderMeadOptions opts;
    opts.max_evals = 20000;
    auto res = nelder_mead(rosen, x0, lo, hi, opts);
    CHECK(res.f < 1e-9);
}

TEST_CASE("nelder_mead respects the box") {
    auto f = [](const Eigen::VectorXd& x) { return -x[0]; };  // pushes to the upper bound
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(1, -1.0);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(1, 2.0);
    auto res = nelder_mead(f, x0, lo, hi);
    CHECK(res.x[0] <= 2.0 + 1e-12);
    CHECK(res.f == doctest::Approx(-2.0));
}

TEST_CASE("halton points are deterministic and inside the box") {
    auto a = halton_points(16, 5, 0.0, 3.0);
    auto b = halton_points(16, 5, 0.0, 3.0);
    REQUIRE(a.size() == 16);
    for (int i = 0; i < 16; ++i) {
        CHECK(a[i] == b[i]);
        for (int d = 0; d < 5; ++d) {
            CHECK(a[i][d] >= 0.0);
            CHECK(a[i][d] <= 3.0);
        }
    }
    // first base-2 coordinate of the first point is 1/2
    CHECK(a[0][0] == doctest::Approx(1.5));
}
