#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dicke4/model.hpp"
#include "dicke4/quantum.hpp"
#include "dicke4/variational.hpp"

namespace dicke4 {

// Dotted parameter paths with 1-based indices: "mu.13", "omega.3", "Omega.1".
double get_param(const ModelConfig& config, const std::string& path);
void apply_param(ModelConfig& config, const std::string& path, double value);

enum class ScanMethod { Variational, Quantum };

struct QuantumScanOptions {
    double tol = 1e-8;
    int M_cap = 120;
};

struct ScanSpec {
    ModelConfig base;
    std::string path;
    double lo = 0.0;
    double hi = 1.0;
    int steps = 2;  // number of grid points, >= 2
    ScanMethod method = ScanMethod::Variational;
    QuantumScanOptions quantum;
};

struct ScanRow {
    double param = 0.0;
    std::optional<Region> region;  // empty for quantum rows
    ObservableSet obs;
    bool quantum_converged = true;
    int m_max = 0;       // converged truncation (quantum rows)
    std::string sector;  // winning parity sector (quantum rows)
    std::string error;   // nonempty when this point failed
};

// One row per grid point, in parameter order. Failed points carry an error
// marker and the scan continues. Points are independent and run in parallel.
std::vector<ScanRow> scan_1d(const ScanSpec& spec);

struct GridSpec {
    ModelConfig base;
    std::string path_p, path_q;
    double p_lo = 0.0, p_hi = 1.0;
    int p_steps = 2;
    double q_lo = 0.0, q_hi = 1.0;
    int q_steps = 2;
    ScanMethod method = ScanMethod::Variational;
    QuantumScanOptions quantum;
};

struct GridRow {
    double p = 0.0, q = 0.0;
    Region region = Region::Norm;
    double energy = 0.0;
    bool tie = false;
    std::optional<Region> tied_with;
    std::string error;
};

// Row-major over (p, q); deterministic.
std::vector<GridRow> grid_2d(const GridSpec& spec);

// Parameter value where the two region energies cross, by bisection to
// |delta param| < 1e-10. The ordering of E_a vs E_b must differ at the
// bracket ends (invalid regions count as +infinity); otherwise NoBracket.
double separatrix_root(const ModelConfig& config, Region a, Region b, const std::string& path,
                       double lo, double hi);

enum class TransitionOrder { First, Second };

struct TransitionRecord {
    double location = 0.0;
    Region left = Region::Norm;
    Region right = Region::Norm;
    TransitionOrder order = TransitionOrder::Second;
    double jump = 0.0;  // |<nu1+nu2>| discontinuity across the boundary
};

// Classifies the transition at a located boundary: the variational order
// parameter <nu1 + nu2> is evaluated at boundary +- epsilon; a jump above
// 1e-2 marks a first-order (Maxwell-set) transition.
TransitionRecord transition_order(const ModelConfig& config, double boundary,
                                  const std::string& path, double epsilon = 1e-4);

}  // namespace dicke4
