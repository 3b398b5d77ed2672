#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace dicke4 {

struct NelderMeadOptions {
    double f_tol = 1e-13;      // simplex function spread, relative to 1+|f_best|
    double x_tol = 1e-9;       // simplex diameter
    long max_evals = 100000;
    double initial_step = 0.5;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0.0;
    long evals = 0;
    bool converged = false;
};

// Derivative-free simplex minimization. Trial points are clamped into
// [lo, hi] componentwise before evaluation, so the returned x lies in the box.
// Deterministic for identical inputs.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi, const NelderMeadOptions& opts = {});

// First `count` points of the Halton sequence scaled to [lo, hi]^dim (dim <= 6).
std::vector<Eigen::VectorXd> halton_points(int count, int dim, double lo, double hi);

}  // namespace dicke4
