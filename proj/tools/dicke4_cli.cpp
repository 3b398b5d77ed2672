// dicke4 command-line front end: variational and exact ground states,
// 1-D scans and 2-D phase-diagram grids, CSV output with manifest sidecars.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "dicke4/io.hpp"
#include "dicke4/phasediag.hpp"
#include "dicke4/quantum.hpp"
#include "dicke4/variational.hpp"

namespace {

using namespace dicke4;

// Writes the payload to `out` (or stdout) and the manifest alongside it
// (or to stderr when printing to stdout).
void emit(const std::string& out_path, const std::string& payload, const RunManifest& manifest) {
    if (out_path.empty()) {
        std::cout << payload;
        std::cerr << manifest.to_text();
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error(Errc::BadConfigFile, "cannot write output file: " + out_path);
    out << payload;
    std::ofstream man(out_path + ".manifest", std::ios::binary);
    man << manifest.to_text();
}

std::string point_json(const VariationalPoint& p, int indent) {
    std::string pad(indent, ' ');
    std::ostringstream os;
    os << "{\n";
    os << pad << "  \"chart\": \"" << chart_name(p.chart) << "\",\n";
    os << pad << "  \"r\": [" << format_g9(p.r[0]) << ", " << format_g9(p.r[1]) << "],\n";
    os << pad << "  \"theta\": [" << format_g9(p.theta[0]) << ", " << format_g9(p.theta[1])
       << "],\n";
    os << pad << "  \"rho\": [" << format_g9(p.rho[0]) << ", " << format_g9(p.rho[1]) << ", "
       << format_g9(p.rho[2]) << "],\n";
    auto g = p.matter_weights();
    os << pad << "  \"weights\": [";
    for (int k = 0; k < 4; ++k) os << (k ? ", " : "") << format_g9(g[k]);
    os << "]\n" << pad << "}";
    return os.str();
}

std::string observables_json(const ObservableSet& obs) {
    std::ostringstream os;
    os << "{\"energy\": " << format_g9(obs.energy) << ", \"nu1\": " << format_g9(obs.nu1)
       << ", \"nu2\": " << format_g9(obs.nu2);
    for (int k = 0; k < 4; ++k) os << ", \"A" << k + 1 << k + 1 << "\": " << format_g9(obs.A[k]);
    os << "}";
    return os.str();
}

int cmd_variational(const std::string& config_path, const std::string& out_path) {
    ModelConfig config = load_config(config_path);
    RegionReport rep = classify(config);
    ObservableSet obs = report_observables(config, rep);
    bool analytic = config.kind != Configuration::Lambda || config.omega[0] == config.omega[1];

    std::ostringstream os;
    os << "{\n";
    os << "  \"command\": \"variational\",\n";
    os << "  \"method\": \"" << (analytic ? "analytic" : "numeric") << "\",\n";
    os << "  \"label\": \"" << region_name(rep.label) << "\",\n";
    os << "  \"energy\": " << format_g9(rep.energy) << ",\n";
    os << "  \"tie\": " << (rep.tie ? "true" : "false") << ",\n";
    os << "  \"critical_point\": " << point_json(rep.point, 2) << ",\n";
    os << "  \"observables\": " << observables_json(obs);
    if (analytic) {
        os << ",\n  \"region_energies\": {";
        bool first = true;
        for (const auto& [r, e] : region_energies(config)) {
            os << (first ? "" : ", ") << "\"" << region_name(r) << "\": {\"energy\": "
               << (e.valid ? format_g9(e.energy) : "\"invalid\"")
               << ", \"valid\": " << (e.valid ? "true" : "false") << "}";
            first = false;
        }
        os << "}";
    }
    os << "\n}\n";

    RunManifest manifest{"variational", config, {{"config", config_path}}, utc_timestamp()};
    emit(out_path, os.str(), manifest);
    return 0;
}

int cmd_quantum(const std::string& config_path, const std::string& out_path, int mmax,
                double tol, int mcap) {
    ModelConfig config = load_config(config_path);
    SpectralResult res =
        mmax > 0 ? ground_state(config, mmax) : converge(config, tol, 10, 10, mcap);
    ObservableSet obs = quantum_observables(config, res);

    std::ostringstream os;
    os << "{\n";
    os << "  \"command\": \"quantum\",\n";
    os << "  \"energy\": " << format_g9(res.energy) << ",\n";
    os << "  \"energy_per_particle\": " << format_g9(res.energy / config.Na) << ",\n";
    os << "  \"sector\": \"" << res.sector.name(config.kind) << "\",\n";
    os << "  \"M_max\": " << res.M_max << ",\n";
    os << "  \"converged\": " << (res.converged ? "true" : "false") << ",\n";
    os << "  \"sector_tie\": " << (res.sector_tie ? "true" : "false") << ",\n";
    os << "  \"basis_dim\": " << res.basis.size() << ",\n";
    os << "  \"observables\": " << observables_json(obs) << "\n";
    os << "}\n";

    RunManifest manifest{"quantum", config, {{"config", config_path}}, utc_timestamp()};
    manifest.has_quantum = true;
    manifest.quantum_tol = mmax > 0 ? 0.0 : tol;
    manifest.quantum_m_max = res.M_max;
    if (mmax > 0) manifest.parameters.emplace_back("mmax", std::to_string(mmax));
    emit(out_path, os.str(), manifest);
    return res.converged ? 0 : 3;
}

int cmd_scan(const std::string& config_path, const std::string& out_path, ScanSpec spec) {
    spec.base = load_config(config_path);
    auto rows = scan_1d(spec);

    RunManifest manifest{"scan", spec.base, {}, utc_timestamp()};
    manifest.parameters = {{"config", config_path},
                           {"vary", spec.path},
                           {"from", format_g9(spec.lo)},
                           {"to", format_g9(spec.hi)},
                           {"steps", std::to_string(spec.steps)},
                           {"method", spec.method == ScanMethod::Quantum ? "quantum" : "variational"}};
    bool all_converged = true;
    if (spec.method == ScanMethod::Quantum) {
        manifest.has_quantum = true;
        manifest.quantum_tol = spec.quantum.tol;
        for (const auto& row : rows) {
            manifest.quantum_m_max = std::max(manifest.quantum_m_max, row.m_max);
            all_converged = all_converged && row.quantum_converged;
        }
    }
    emit(out_path, scan_csv(rows), manifest);
    return all_converged ? 0 : 3;
}

int cmd_phase_diagram(const std::string& config_path, const std::string& out_path,
                      GridSpec spec) {
    spec.base = load_config(config_path);
    if (spec.method == ScanMethod::Quantum)
        std::cerr << "note: quantum phase-diagram grids are exact but slow\n";
    auto rows = grid_2d(spec);

    RunManifest manifest{"phase-diagram", spec.base, {}, utc_timestamp()};
    manifest.parameters = {
        {"config", config_path},
        {"vary", spec.path_p + "," + spec.path_q},
        {"grid", std::to_string(spec.p_steps) + "x" + std::to_string(spec.q_steps)},
        {"from", format_g9(spec.p_lo) + "," + format_g9(spec.q_lo)},
        {"to", format_g9(spec.p_hi) + "," + format_g9(spec.q_hi)},
        {"method", spec.method == ScanMethod::Quantum ? "quantum" : "variational"}};
    emit(out_path, grid_csv(rows), manifest);
    return 0;
}

std::pair<std::string, std::string> split_pair(const std::string& s, char sep,
                                               const std::string& what) {
    auto pos = s.find(sep);
    if (pos == std::string::npos || pos == 0 || pos + 1 >= s.size())
        throw Error(Errc::BadParameterPath, what + " must contain '" + sep + "': " + s);
    return {s.substr(0, pos), s.substr(pos + 1)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ground states and phase diagrams of 4-level atoms coupled to two field modes"};
    app.set_version_flag("--version", std::string(dicke4::kToolVersion));
    app.require_subcommand(1);

    std::string config_path, out_path;

    auto* var = app.add_subcommand("variational", "variational ground state and observables");
    var->add_option("--config", config_path, "model config file (JSON)")->required();
    var->add_option("--out", out_path, "output path (default: stdout)");

    auto* qu = app.add_subcommand("quantum", "exact ground state in the symmetry sectors");
    int mmax = 0, mcap = 120;
    double tol = 1e-8;
    qu->add_option("--config", config_path, "model config file (JSON)")->required();
    qu->add_option("--out", out_path, "output path (default: stdout)");
    qu->add_option("--mmax", mmax, "fixed truncation M_max (skips convergence loop)");
    qu->add_option("--tol", tol, "convergence tolerance on E_g")->capture_default_str();
    qu->add_option("--mcap", mcap, "largest truncation tried")->capture_default_str();

    auto* sc = app.add_subcommand("scan", "1-D parameter scan to CSV");
    std::string vary, method = "variational";
    double from = 0.0, to = 1.0;
    int steps = 2;
    sc->add_option("--config", config_path, "model config file (JSON)")->required();
    sc->add_option("--vary", vary, "parameter path, e.g. mu.23")->required();
    sc->add_option("--from", from, "range start")->required();
    sc->add_option("--to", to, "range end")->required();
    sc->add_option("--steps", steps, "number of grid points")->required();
    sc->add_option("--method", method, "variational | quantum")->capture_default_str();
    sc->add_option("--tol", tol, "quantum convergence tolerance")->capture_default_str();
    sc->add_option("--mcap", mcap, "quantum truncation cap")->capture_default_str();
    sc->add_option("--out", out_path, "output CSV path (default: stdout)");

    auto* pd = app.add_subcommand("phase-diagram", "2-D region grid to CSV");
    std::string vary2, grid = "11x11", from2 = "0,0", to2 = "1,1";
    pd->add_option("--config", config_path, "model config file (JSON)")->required();
    pd->add_option("--vary", vary2, "two parameter paths, e.g. mu.13,mu.23")->required();
    pd->add_option("--grid", grid, "rows x cols, e.g. 101x101")->capture_default_str();
    pd->add_option("--from", from2, "range starts p,q")->capture_default_str();
    pd->add_option("--to", to2, "range ends p,q")->capture_default_str();
    pd->add_option("--method", method, "variational | quantum")->capture_default_str();
    pd->add_option("--out", out_path, "output CSV path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (var->parsed()) return cmd_variational(config_path, out_path);
        if (qu->parsed()) return cmd_quantum(config_path, out_path, mmax, tol, mcap);

        dicke4::ScanMethod m;
        if (method == "variational")
            m = dicke4::ScanMethod::Variational;
        else if (method == "quantum")
            m = dicke4::ScanMethod::Quantum;
        else
            throw dicke4::Error(dicke4::Errc::BadParameterPath,
                                "--method must be variational or quantum, got " + method);

        if (sc->parsed()) {
            dicke4::ScanSpec spec;
            spec.path = vary;
            spec.lo = from;
            spec.hi = to;
            spec.steps = steps;
            spec.method = m;
            spec.quantum = {tol, mcap};
            return cmd_scan(config_path, out_path, std::move(spec));
        }
        if (pd->parsed()) {
            dicke4::GridSpec spec;
            auto [pp, pq] = split_pair(vary2, ',', "--vary");
            spec.path_p = pp;
            spec.path_q = pq;
            auto [gr, gc] = split_pair(grid, 'x', "--grid");
            spec.p_steps = std::stoi(gr);
            spec.q_steps = std::stoi(gc);
            auto [flo, fq] = split_pair(from2, ',', "--from");
            spec.p_lo = std::stod(flo);
            spec.q_lo = std::stod(fq);
            auto [tp, tq] = split_pair(to2, ',', "--to");
            spec.p_hi = std::stod(tp);
            spec.q_hi = std::stod(tq);
            spec.method = m;
            spec.quantum = {tol, mcap};
            return cmd_phase_diagram(config_path, out_path, std::move(spec));
        }
    } catch (const dicke4::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return dicke4::is_config_error(e.code) ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
