#include "dicke4/phasediag.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dicke4 {

namespace {

std::pair<std::string, std::string> split_path(const std::string& path) {
    auto dot = path.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= path.size())
        throw Error(Errc::BadParameterPath, "parameter path must look like mu.13 or Omega.1: " + path);
    return {path.substr(0, dot), path.substr(dot + 1)};
}

double* param_slot(ModelConfig& config, const std::string& path) {
    auto [head, tail] = split_path(path);
    if (head == "mu") {
        if (tail.size() != 2 || !std::isdigit(tail[0]) || !std::isdigit(tail[1]))
            throw Error(Errc::BadParameterPath, "bad mu key in path: " + path);
        std::pair<int, int> key{tail[0] - '0', tail[1] - '0'};
        auto it = config.mu.find(key);
        if (it == config.mu.end())
            throw Error(Errc::BadParameterPath,
                        "mu." + tail + " is not a coupling of this configuration");
        return &it->second;
    }
    if (head == "omega") {
        int k = tail.size() == 1 ? tail[0] - '0' : -1;
        if (k < 1 || k > 4) throw Error(Errc::BadParameterPath, "omega index out of range: " + path);
        return &config.omega[k - 1];
    }
    if (head == "Omega") {
        int s = tail.size() == 1 ? tail[0] - '0' : -1;
        if (s < 1 || s > 2) throw Error(Errc::BadParameterPath, "Omega index out of range: " + path);
        return &config.Omega[s - 1];
    }
    throw Error(Errc::BadParameterPath, "unknown parameter group in path: " + path);
}

double linspace_at(double lo, double hi, int steps, int i) {
    return lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
}

ModelConfig at_value(const ModelConfig& base, const std::string& path, double value) {
    ModelConfig c = base;
    *param_slot(c, path) = value;
    return validate(std::move(c));
}

}  // namespace

double get_param(const ModelConfig& config, const std::string& path) {
    ModelConfig copy = config;
    return *param_slot(copy, path);
}

void apply_param(ModelConfig& config, const std::string& path, double value) {
    *param_slot(config, path) = value;
}

std::vector<ScanRow> scan_1d(const ScanSpec& spec) {
    if (!(spec.lo < spec.hi)) throw Error(Errc::BadParameterPath, "scan range must satisfy lo < hi");
    if (spec.steps < 2) throw Error(Errc::BadParameterPath, "scan needs at least 2 steps");
    get_param(spec.base, spec.path);  // path must exist

    std::vector<ScanRow> rows(spec.steps);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < spec.steps; ++i) {
        ScanRow& row = rows[i];
        row.param = linspace_at(spec.lo, spec.hi, spec.steps, i);
        try {
            ModelConfig c = at_value(spec.base, spec.path, row.param);
            if (spec.method == ScanMethod::Variational) {
                RegionReport rep = classify(c);
                row.region = rep.label;
                row.obs = report_observables(c, rep);
            } else {
                SpectralResult res = converge(c, spec.quantum.tol, 10, 10, spec.quantum.M_cap);
                row.obs = quantum_observables(c, res);
                row.quantum_converged = res.converged;
                row.m_max = res.M_max;
                row.sector = res.sector.name(c.kind);
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    }
    return rows;
}

std::vector<GridRow> grid_2d(const GridSpec& spec) {
    if (!(spec.p_lo < spec.p_hi) || !(spec.q_lo < spec.q_hi))
        throw Error(Errc::BadParameterPath, "grid ranges must satisfy lo < hi");
    if (spec.p_steps < 2 || spec.q_steps < 2)
        throw Error(Errc::BadParameterPath, "grid needs at least 2 steps per axis");
    get_param(spec.base, spec.path_p);
    get_param(spec.base, spec.path_q);

    const int total = spec.p_steps * spec.q_steps;
    std::vector<GridRow> rows(total);
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < total; ++t) {
        GridRow& row = rows[t];
        const int ip = t / spec.q_steps, iq = t % spec.q_steps;
        row.p = linspace_at(spec.p_lo, spec.p_hi, spec.p_steps, ip);
        row.q = linspace_at(spec.q_lo, spec.q_hi, spec.q_steps, iq);
        try {
            ModelConfig c = at_value(spec.base, spec.path_p, row.p);
            apply_param(c, spec.path_q, row.q);
            c = validate(std::move(c));
            if (spec.method == ScanMethod::Variational) {
                RegionReport rep = classify(c);
                row.region = rep.label;
                row.energy = rep.energy;
                row.tie = rep.tie;
                if (rep.tie) {
                    // report the runner-up label of the boundary sample
                    auto energies = region_energies(c);
                    for (const auto& [r, e] : energies) {
                        if (r == rep.label || !e.valid) continue;
                        if (std::abs(e.energy - rep.energy) <= 1e-12) {
                            row.tied_with = r;
                            break;
                        }
                    }
                }
            } else {
                SpectralResult res = converge(c, spec.quantum.tol, 10, 10, spec.quantum.M_cap);
                row.energy = res.energy / c.Na;
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    }
    return rows;
}

namespace {

double region_energy_at(const ModelConfig& base, Region r, const std::string& path, double x) {
    ModelConfig c = at_value(base, path, x);
    auto energies = region_energies(c);
    auto it = energies.find(r);
    if (it == energies.end())
        throw Error(Errc::RegionInvalid, std::string(region_name(r)) + " undefined for this kind");
    return it->second.valid ? it->second.energy : std::numeric_limits<double>::infinity();
}

}  // namespace

double separatrix_root(const ModelConfig& config, Region a, Region b, const std::string& path,
                       double lo, double hi) {
    auto ordering = [&](double x) -> int {
        double ea = region_energy_at(config, a, path, x);
        double eb = region_energy_at(config, b, path, x);
        if (ea < eb) return -1;
        if (ea > eb) return +1;
        return 0;
    };
    int slo = ordering(lo), shi = ordering(hi);
    if (slo == 0) return lo;
    if (shi == 0) return hi;
    if (slo == shi) {
        std::ostringstream os;
        os << "energies of " << region_name(a) << " and " << region_name(b)
           << " are ordered the same way at both ends of [" << lo << ", " << hi << "]";
        throw Error(Errc::NoBracket, os.str());
    }
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        int sm = ordering(mid);
        if (sm == 0) return mid;
        if (sm == slo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

TransitionRecord transition_order(const ModelConfig& config, double boundary,
                                  const std::string& path, double epsilon) {
    auto side = [&](double x) {
        ModelConfig c = at_value(config, path, x);
        RegionReport rep = classify(c);
        ObservableSet obs = report_observables(c, rep);
        return std::pair<Region, double>(rep.label, obs.nu1 + obs.nu2);
    };
    auto [left_label, left_op] = side(boundary - epsilon);
    auto [right_label, right_op] = side(boundary + epsilon);

    TransitionRecord rec;
    rec.location = boundary;
    rec.left = left_label;
    rec.right = right_label;
    rec.jump = std::abs(right_op - left_op);
    rec.order = rec.jump > 1e-2 ? TransitionOrder::First : TransitionOrder::Second;
    return rec;
}

}  // namespace dicke4
