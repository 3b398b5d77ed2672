#include "dicke4/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dicke4/minimize.hpp"

namespace dicke4 {

namespace {

constexpr double kModuliBox = 1e3;
constexpr double kInf = std::numeric_limits<double>::infinity();

int pinned_index(MatterChart c) {
    switch (c) {
        case MatterChart::Rho1Fixed: return 0;
        case MatterChart::Rho2Fixed: return 1;
        case MatterChart::Rho3Fixed: return 2;
    }
    return 0;
}

// level indices (0-based) carried by the three chart coordinates
std::array<int, 3> free_indices(MatterChart c) {
    switch (c) {
        case MatterChart::Rho1Fixed: return {1, 2, 3};
        case MatterChart::Rho2Fixed: return {0, 2, 3};
        case MatterChart::Rho3Fixed: return {0, 1, 3};
    }
    return {1, 2, 3};
}

}  // namespace

std::string_view chart_name(MatterChart c) {
    switch (c) {
        case MatterChart::Rho1Fixed: return "rho1_fixed";
        case MatterChart::Rho2Fixed: return "rho2_fixed";
        case MatterChart::Rho3Fixed: return "rho3_fixed";
    }
    return "?";
}

std::array<double, 4> VariationalPoint::matter_weights() const {
    std::array<double, 4> g{0.0, 0.0, 0.0, 0.0};
    g[pinned_index(chart)] = 1.0;
    auto idx = free_indices(chart);
    for (int k = 0; k < 3; ++k) g[idx[k]] = rho[k];
    return g;
}

double VariationalPoint::gamma0_sq() const {
    auto g = matter_weights();
    return g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
}

std::optional<VariationalPoint> rechart(const VariationalPoint& p, MatterChart target) {
    auto g = p.matter_weights();
    double pin = g[pinned_index(target)];
    if (pin == 0.0) return std::nullopt;
    VariationalPoint q = p;
    q.chart = target;
    auto idx = free_indices(target);
    for (int k = 0; k < 3; ++k) q.rho[k] = g[idx[k]] / pin;
    return q;
}

double energy_surface(const ModelConfig& config, const VariationalPoint& p) {
    for (double v : p.r)
        if (!std::isfinite(v)) throw Error(Errc::ChartMismatch, "non-finite field amplitude");
    for (double v : p.rho)
        if (!std::isfinite(v)) throw Error(Errc::ChartMismatch, "non-finite matter modulus");

    auto g = p.matter_weights();
    double G2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];

    double E = config.Omega[0] * p.r[0] * p.r[0] + config.Omega[1] * p.r[1] * p.r[1];
    double diag = 0.0;
    for (int k = 0; k < 4; ++k) diag += config.omega[k] * g[k] * g[k];
    E += diag / G2;

    const auto& edges = coupling_edges(config.kind);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& ed = edges[e];
        double mu = config.mu_at(ed.lower, ed.upper);
        E -= 4.0 / G2 * mu * g[ed.lower - 1] * g[ed.upper - 1] * p.r[ed.mode - 1] *
             std::cos(p.theta[ed.mode - 1]) * std::cos(p.phi[e]);
    }
    return E;
}

std::array<double, 2> critical_fields(const ModelConfig& config, const VariationalPoint& p) {
    auto g = p.matter_weights();
    double G2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
    std::array<double, 2> num{0.0, 0.0};
    for (const auto& ed : coupling_edges(config.kind))
        num[ed.mode - 1] += config.mu_at(ed.lower, ed.upper) * g[ed.lower - 1] * g[ed.upper - 1];
    return {2.0 * num[0] / (config.Omega[0] * G2), 2.0 * num[1] / (config.Omega[1] * G2)};
}

namespace {

// Every collective region is a 2-level reduction characterized by a base
// level energy, an effective squared coupling, a level gap and its mode.
struct Reduction {
    double base = 0.0;         // omega of the reduction's lower level
    double coupling_sq = 0.0;  // mu^2 (SLambda: mu13^2 + mu23^2)
    double gap = 0.0;          // omega_j - omega_i
    double mode = 1.0;         // driving mode frequency
    int mode_index = 0;        // 0 or 1
};

Reduction reduction_params(const ModelConfig& c, Region r) {
    const bool lam = c.kind == Configuration::Lambda;
    switch (r) {
        case Region::SLambda: {
            double m13 = c.mu_at(1, 3), m23 = c.mu_at(2, 3);
            return {c.omega[0], m13 * m13 + m23 * m23, c.gap(3, 1), c.Omega[0], 0};
        }
        case Region::S23: {
            double m = c.mu_at(2, 3);
            // in the lambda scheme the 2-3 transition is driven by mode 1
            return lam ? Reduction{c.omega[1], m * m, c.gap(3, 2), c.Omega[0], 0}
                       : Reduction{c.omega[1], m * m, c.gap(3, 2), c.Omega[1], 1};
        }
        case Region::S34: {
            double m = c.mu_at(3, 4);
            return {c.omega[2], m * m, c.gap(4, 3), c.Omega[1], 1};
        }
        case Region::S13: {
            double m = c.mu_at(1, 3);
            return {c.omega[0], m * m, c.gap(3, 1), c.Omega[0], 0};
        }
        case Region::S24: {
            double m = c.mu_at(2, 4);
            return {c.omega[1], m * m, c.gap(4, 2), c.Omega[0], 0};
        }
        default: break;
    }
    throw Error(Errc::RegionInvalid, "no reduction for S_norm");
}

bool reduction_valid(const Reduction& rd) {
    return rd.coupling_sq > 0.0 && 4.0 * rd.coupling_sq - rd.gap * rd.mode >= 0.0;
}

RegionEnergy reduction_energy(const Reduction& rd) {
    if (!reduction_valid(rd)) return {kInf, false};
    double disc = 4.0 * rd.coupling_sq - rd.gap * rd.mode;
    return {rd.base - disc * disc / (16.0 * rd.coupling_sq * rd.mode), true};
}

void require_equal_detuning(const ModelConfig& config) {
    if (config.kind == Configuration::Lambda && config.omega[0] != config.omega[1])
        throw Error(Errc::EqualDetuningRequired,
                    "lambda closed forms require omega_1 == omega_2");
}

void require_region(const ModelConfig& config, Region region) {
    if (!region_valid_for(config.kind, region)) {
        std::ostringstream os;
        os << region_name(region) << " is not a region of the "
           << configuration_name(config.kind) << " configuration";
        throw Error(Errc::RegionInvalid, os.str());
    }
}

}  // namespace

VariationalPoint analytic_critical_point(const ModelConfig& config, Region region) {
    require_region(config, region);
    if (region == Region::Norm) return {};
    require_equal_detuning(config);

    Reduction rd = reduction_params(config, region);
    if (!reduction_valid(rd)) {
        std::ostringstream os;
        os << region_name(region) << " does not exist: 4 mu^2 - (omega_j - omega_i) Omega' = "
           << 4.0 * rd.coupling_sq - rd.gap * rd.mode << " < 0";
        throw Error(Errc::RegionInvalid, os.str());
    }
    double disc = 4.0 * rd.coupling_sq - rd.gap * rd.mode;
    double upper = 4.0 * rd.coupling_sq + rd.gap * rd.mode;
    double exc = std::sqrt(disc / upper);
    double c = rd.gap * rd.mode;
    double rc = std::sqrt(16.0 * rd.coupling_sq * rd.coupling_sq - c * c) /
                (4.0 * std::sqrt(rd.coupling_sq) * rd.mode);

    VariationalPoint p;
    p.r[rd.mode_index] = rc;
    switch (region) {
        case Region::SLambda: {
            double m13 = config.mu_at(1, 3), m23 = config.mu_at(2, 3);
            if (m13 == 0.0)
                throw Error(Errc::RegionInvalid,
                            "S_Lambda critical point degenerates to S_23 at mu_13 = 0");
            p.chart = MatterChart::Rho1Fixed;
            p.rho = {m23 / m13,
                     std::sqrt(rd.coupling_sq * disc / (m13 * m13 * upper)), 0.0};
            break;
        }
        case Region::S23:
            p.chart = MatterChart::Rho2Fixed;
            p.rho = {0.0, exc, 0.0};
            break;
        case Region::S34:
            p.chart = MatterChart::Rho3Fixed;
            p.rho = {0.0, 0.0, exc};
            break;
        case Region::S13:
            p.chart = MatterChart::Rho1Fixed;
            p.rho = {0.0, exc, 0.0};
            break;
        case Region::S24:
            p.chart = MatterChart::Rho2Fixed;
            p.rho = {0.0, 0.0, exc};
            break;
        default: break;
    }
    return p;
}

std::map<Region, RegionEnergy> region_energies(const ModelConfig& config) {
    require_equal_detuning(config);
    std::map<Region, RegionEnergy> out;
    for (Region r : region_labels(config.kind)) {
        if (r == Region::Norm)
            out[r] = {config.omega[0], true};
        else
            out[r] = reduction_energy(reduction_params(config, r));
    }
    return out;
}

ObservableSet observables(const ModelConfig& config, Region region) {
    require_region(config, region);
    if (region == Region::Norm) {
        ObservableSet obs;
        obs.energy = config.omega[0];
        obs.A = {1.0, 0.0, 0.0, 0.0};
        return obs;
    }
    require_equal_detuning(config);

    Reduction rd = reduction_params(config, region);
    if (!reduction_valid(rd))
        throw Error(Errc::RegionInvalid, std::string(region_name(region)) + " is not valid here");

    double c2 = rd.coupling_sq;
    double c = rd.gap * rd.mode;
    double disc = 4.0 * c2 - c;
    double upper = 4.0 * c2 + c;

    ObservableSet obs;
    obs.energy = rd.base - disc * disc / (16.0 * c2 * rd.mode);
    double nu = (16.0 * c2 * c2 - c * c) / (16.0 * c2 * rd.mode * rd.mode);
    double pop_lo = upper / (8.0 * c2);  // 1/2 + c/(8 mu^2)
    double pop_hi = disc / (8.0 * c2);   // 1/2 - c/(8 mu^2)

    (rd.mode_index == 0 ? obs.nu1 : obs.nu2) = nu;
    switch (region) {
        case Region::SLambda: {
            double m13 = config.mu_at(1, 3), m23 = config.mu_at(2, 3);
            obs.A[0] = m13 * m13 * upper / (8.0 * c2 * c2);
            obs.A[1] = m23 * m23 * upper / (8.0 * c2 * c2);
            obs.A[2] = pop_hi;
            break;
        }
        case Region::S23:
            obs.A[1] = pop_lo;
            obs.A[2] = pop_hi;
            break;
        case Region::S34:
            obs.A[2] = pop_lo;
            obs.A[3] = pop_hi;
            break;
        case Region::S13:
            obs.A[0] = pop_lo;
            obs.A[2] = pop_hi;
            break;
        case Region::S24:
            obs.A[1] = pop_lo;
            obs.A[3] = pop_hi;
            break;
        default: break;
    }
    return obs;
}

ObservableSet point_observables(const ModelConfig& config, const VariationalPoint& p) {
    ObservableSet obs;
    obs.energy = energy_surface(config, p);
    obs.nu1 = p.r[0] * p.r[0];
    obs.nu2 = p.r[1] * p.r[1];
    auto g = p.matter_weights();
    double G2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
    for (int k = 0; k < 4; ++k) obs.A[k] = g[k] * g[k] / G2;
    return obs;
}

ObservableSet report_observables(const ModelConfig& config, const RegionReport& report) {
    if (config.kind == Configuration::Lambda && config.omega[0] != config.omega[1])
        return point_observables(config, report.point);
    return observables(config, report.label);
}

namespace {

Region label_from_point(const ModelConfig& config, const VariationalPoint& p) {
    auto g = p.matter_weights();
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    std::array<bool, 4> on{};
    for (int k = 0; k < 4; ++k) on[k] = std::abs(g[k]) / gmax > 1e-6;

    if (config.kind == Configuration::Lambda) {
        if (on[3]) return Region::S34;
        if (on[2]) {
            if (on[0]) return Region::SLambda;
            return Region::S23;
        }
        return Region::Norm;
    }
    if (on[3]) return Region::S24;
    if (on[2]) return on[0] ? Region::S13 : Region::S23;
    return Region::Norm;
}

// flat per-config view of the surface, cheap enough for ~1e8 evaluations
struct SurfaceCache {
    std::array<double, 2> Om;
    std::array<double, 4> om;
    struct Edge {
        int i, j, m;
        double mu;
    };
    std::array<Edge, 3> edges;
    MatterChart chart;

    explicit SurfaceCache(const ModelConfig& c, MatterChart ch) : Om(c.Omega), om(c.omega), chart(ch) {
        const auto& es = coupling_edges(c.kind);
        for (int e = 0; e < 3; ++e)
            edges[e] = {es[e].lower - 1, es[e].upper - 1, es[e].mode - 1,
                        c.mu_at(es[e].lower, es[e].upper)};
    }

    // x = (r1, r2, rho0, rho1, rho2), all nonnegative
    double eval(const double* x) const {
        std::array<double, 4> g{0.0, 0.0, 0.0, 0.0};
        g[pinned_index(chart)] = 1.0;
        auto idx = free_indices(chart);
        for (int k = 0; k < 3; ++k) g[idx[k]] = x[2 + k];
        double G2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
        double E = Om[0] * x[0] * x[0] + Om[1] * x[1] * x[1];
        double diag = om[0] * g[0] * g[0] + om[1] * g[1] * g[1] + om[2] * g[2] * g[2] +
                      om[3] * g[3] * g[3];
        double inter = 0.0;
        for (const auto& e : edges) inter += e.mu * g[e.i] * g[e.j] * x[e.m];
        return E + (diag - 4.0 * inter) / G2;
    }
};

}  // namespace

std::vector<MatterChart> charts_for(Configuration kind) {
    if (kind == Configuration::Lambda)
        return {MatterChart::Rho1Fixed, MatterChart::Rho2Fixed, MatterChart::Rho3Fixed};
    return {MatterChart::Rho1Fixed, MatterChart::Rho2Fixed};
}

std::vector<VariationalPoint> default_seeds(const ModelConfig& config, MatterChart chart) {
    std::vector<VariationalPoint> seeds;
    VariationalPoint origin;
    origin.chart = chart;
    seeds.push_back(origin);

    bool analytic_rows = config.kind == Configuration::NConfig || config.omega[0] == config.omega[1];
    if (analytic_rows) {
        for (Region r : region_labels(config.kind)) {
            if (r == Region::Norm) continue;
            VariationalPoint p;
            try {
                p = analytic_critical_point(config, r);
            } catch (const Error&) {
                continue;
            }
            auto q = rechart(p, chart);
            if (!q) continue;
            bool ok = true;
            for (double v : q->rho) ok = ok && std::isfinite(v) && std::abs(v) <= kModuliBox;
            if (ok) seeds.push_back(*q);
        }
    }

    for (const auto& h : halton_points(16, 5, 0.0, 3.0)) {
        VariationalPoint p;
        p.chart = chart;
        p.r = {h[0], h[1]};
        p.rho = {h[2], h[3], h[4]};
        seeds.push_back(p);
    }
    return seeds;
}

MinimizeOutcome minimize_numeric(const ModelConfig& config, MatterChart chart,
                                 std::span<const VariationalPoint> seeds, double tol) {
    SurfaceCache cache(config, chart);
    auto objective = [&cache](const Eigen::VectorXd& x) {
        double y[5];
        for (int k = 0; k < 5; ++k) y[k] = std::min(std::abs(x[k]), kModuliBox);
        return cache.eval(y);
    };

    NelderMeadOptions opts;
    opts.f_tol = tol;
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(5, -kModuliBox);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(5, kModuliBox);

    Eigen::VectorXd best_x;
    double best_f = kInf;
    long evals = 0;
    bool any_converged = false;
    for (const auto& s : seeds) {
        if (s.chart != chart) throw Error(Errc::ChartMismatch, "seed chart differs from search chart");
        Eigen::VectorXd x0(5);
        x0 << s.r[0], s.r[1], s.rho[0], s.rho[1], s.rho[2];
        auto res = nelder_mead(objective, x0, lo, hi, opts);
        evals += res.evals;
        any_converged = any_converged || res.converged;
        if (res.f < best_f) {
            best_f = res.f;
            best_x = res.x;
        }
    }
    if (!any_converged)
        throw Error(Errc::NoConvergence, "simplex minimization hit the evaluation cap on every seed");

    // polish the winner with progressively tighter simplices
    for (double step : {1e-2, 1e-4}) {
        NelderMeadOptions popts = opts;
        popts.initial_step = step;
        auto res = nelder_mead(objective, best_x, lo, hi, popts);
        evals += res.evals;
        if (res.f < best_f) {
            best_f = res.f;
            best_x = res.x;
        }
    }

    VariationalPoint p;
    p.chart = chart;
    p.r = {std::min(std::abs(best_x[0]), kModuliBox), std::min(std::abs(best_x[1]), kModuliBox)};
    for (int k = 0; k < 3; ++k) p.rho[k] = std::min(std::abs(best_x[2 + k]), kModuliBox);
    return {p, best_f, evals};
}

MinimizeOutcome minimize_numeric(const ModelConfig& config, MatterChart chart, double tol) {
    auto seeds = default_seeds(config, chart);
    return minimize_numeric(config, chart, std::span<const VariationalPoint>(seeds), tol);
}

MinimizeOutcome minimize_global(const ModelConfig& config, double tol) {
    MinimizeOutcome best;
    best.energy = kInf;
    long total = 0;
    for (MatterChart chart : charts_for(config.kind)) {
        auto out = minimize_numeric(config, chart, tol);
        total += out.evaluations;
        if (out.energy < best.energy) best = out;
    }
    best.evaluations = total;
    return best;
}

RegionReport classify(const ModelConfig& config) {
    if (config.kind == Configuration::Lambda && config.omega[0] != config.omega[1]) {
        // no closed forms away from equal detuning; search all charts numerically
        auto out = minimize_global(config);
        RegionReport rep;
        rep.label = label_from_point(config, out.point);
        rep.energy = out.energy;
        rep.point = out.point;
        if (rep.label == Region::Norm) {
            rep.energy = config.omega[0];
            rep.point = {};
        }
        return rep;
    }

    auto energies = region_energies(config);
    double emin = kInf;
    for (const auto& [r, e] : energies)
        if (e.valid) emin = std::min(emin, e.energy);

    Region winner = Region::Norm;
    int rank = -1;
    int candidates = 0;
    for (const auto& [r, e] : energies) {
        if (!e.valid || e.energy > emin + 1e-12) continue;
        ++candidates;
        if (excitation_rank(r) > rank) {
            rank = excitation_rank(r);
            winner = r;
        }
    }

    RegionReport rep;
    rep.label = winner;
    rep.energy = energies[winner].energy;
    rep.tie = candidates >= 2;
    rep.point = winner == Region::Norm ? VariationalPoint{}
                                       : analytic_critical_point(config, winner);
    return rep;
}

}  // namespace dicke4
