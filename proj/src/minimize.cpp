#include "dicke4/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dicke4 {

namespace {

Eigen::VectorXd clamped(Eigen::VectorXd x, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi, const NelderMeadOptions& opts) {
    const int n = static_cast<int>(x0.size());
    long evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return f(x);
    };

    // initial simplex: x0 plus one displaced vertex per coordinate
    std::vector<Eigen::VectorXd> v(n + 1);
    std::vector<double> fv(n + 1);
    v[0] = clamped(x0, lo, hi);
    fv[0] = eval(v[0]);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd p = v[0];
        double step = opts.initial_step;
        if (p[i] + step > hi[i]) step = -step;
        p[i] += step;
        v[i + 1] = clamped(p, lo, hi);
        fv[i + 1] = eval(v[i + 1]);
    }

    std::vector<int> ord(n + 1);
    auto sort_simplex = [&] {
        std::iota(ord.begin(), ord.end(), 0);
        std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    };

    constexpr double alpha = 1.0, gamma = 2.0, beta = 0.5, sigma = 0.5;
    bool converged = false;

    while (evals < opts.max_evals) {
        sort_simplex();
        const int best = ord[0], worst = ord[n], second = ord[n - 1];

        double fspread = fv[worst] - fv[best];
        double diam = 0.0;
        for (int i = 1; i <= n; ++i) diam = std::max(diam, (v[ord[i]] - v[best]).lpNorm<Eigen::Infinity>());
        if (fspread <= opts.f_tol * (1.0 + std::abs(fv[best])) && diam <= opts.x_tol) {
            converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += v[i];
        centroid /= n;

        Eigen::VectorXd xr = clamped(centroid + alpha * (centroid - v[worst]), lo, hi);
        double fr = eval(xr);
        if (fr < fv[best]) {
            Eigen::VectorXd xe = clamped(centroid + gamma * (xr - centroid), lo, hi);
            double fe = eval(xe);
            if (fe < fr) {
                v[worst] = xe;
                fv[worst] = fe;
            } else {
                v[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            v[worst] = xr;
            fv[worst] = fr;
        } else {
            bool outside = fr < fv[worst];
            Eigen::VectorXd xc = outside ? clamped(centroid + beta * (xr - centroid), lo, hi)
                                         : clamped(centroid + beta * (v[worst] - centroid), lo, hi);
            double fc = eval(xc);
            if (fc < std::min(fr, fv[worst])) {
                v[worst] = xc;
                fv[worst] = fc;
            } else {
                // shrink toward the best vertex
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    v[i] = clamped(v[best] + sigma * (v[i] - v[best]), lo, hi);
                    fv[i] = eval(v[i]);
                }
            }
        }
    }

    sort_simplex();
    return {v[ord[0]], fv[ord[0]], evals, converged};
}

std::vector<Eigen::VectorXd> halton_points(int count, int dim, double lo, double hi) {
    static constexpr int primes[6] = {2, 3, 5, 7, 11, 13};
    auto radical_inverse = [](int base, int index) {
        double inv = 1.0 / base, r = 0.0, f = inv;
        for (int i = index; i > 0; i /= base) {
            r += f * (i % base);
            f *= inv;
        }
        return r;
    };
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(count);
    for (int k = 1; k <= count; ++k) {
        Eigen::VectorXd p(dim);
        for (int d = 0; d < dim; ++d) p[d] = lo + (hi - lo) * radical_inverse(primes[d], k);
        pts.push_back(p);
    }
    return pts;
}

}  // namespace dicke4
