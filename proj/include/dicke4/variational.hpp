#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dicke4/model.hpp"

namespace dicke4 {

// Projective chart on the matter coherent-state manifold: which weight
// gamma_k is pinned to 1. The three rho coordinates are the remaining
// weights in level order, so
//   Rho1Fixed: (1, rho0, rho1, rho2)   -- level coordinates (rho_2, rho_3, rho_4)
//   Rho2Fixed: (rho0, 1, rho1, rho2)   -- limit coordinates (eta3, eta4) at rho0 = 0
//   Rho3Fixed: (rho0, rho1, 1, rho2)   -- second-limit coordinate (zeta4) at rho0 = rho1 = 0
enum class MatterChart { Rho1Fixed, Rho2Fixed, Rho3Fixed };

std::string_view chart_name(MatterChart c);

// Coherent trial-state coordinates. Field phases theta are per mode; matter
// phases phi follow the coupling-edge order of the configuration. The default
// value is the normal-state marker (field vacuum, all atoms in level 1).
struct VariationalPoint {
    std::array<double, 2> r{0.0, 0.0};
    std::array<double, 2> theta{0.0, 0.0};
    MatterChart chart = MatterChart::Rho1Fixed;
    std::array<double, 3> rho{0.0, 0.0, 0.0};
    std::array<double, 3> phi{0.0, 0.0, 0.0};

    // Full weight vector (gamma_1..gamma_4) including the pinned 1.
    std::array<double, 4> matter_weights() const;
    double gamma0_sq() const;  // Gamma_0^2 = sum of squared weights, >= 1
};

// The same projective point with another coordinate pinned; empty when the
// target's pinned weight vanishes at this point.
std::optional<VariationalPoint> rechart(const VariationalPoint& p, MatterChart target);

// Per-particle expectation values.
struct ObservableSet {
    double energy = 0.0;
    double nu1 = 0.0;
    double nu2 = 0.0;
    std::array<double, 4> A{0.0, 0.0, 0.0, 0.0};
};

struct RegionEnergy {
    double energy = 0.0;  // +infinity when invalid
    bool valid = false;
};

struct RegionReport {
    Region label = Region::Norm;
    double energy = 0.0;
    VariationalPoint point;  // normal marker when label == Norm
    bool valid = true;
    bool tie = false;
};

// Variational energy surface per particle at the given trial point.
double energy_surface(const ModelConfig& config, const VariationalPoint& p);

// Critical field amplitudes (r1c, r2c) for the matter part of `p`, on the
// theta = phi = 0 branch.
std::array<double, 2> critical_fields(const ModelConfig& config, const VariationalPoint& p);

// Closed-form critical point of a collective region. Throws RegionInvalid when the region's existence condition fails
// and EqualDetuningRequired for Lambda with omega_1 != omega_2.
VariationalPoint analytic_critical_point(const ModelConfig& config, Region region);

// Closed-form minimum energy of every region of the configuration; invalid
// regions carry +infinity so min{} never selects them.
std::map<Region, RegionEnergy> region_energies(const ModelConfig& config);

// Global variational ground state: label of the minimal valid region energy.
// Lambda with omega_1 != omega_2 falls back to the numeric minimizer and
// labels the result by its nonzero-moduli pattern.
RegionReport classify(const ModelConfig& config);

// Closed-form expectation-value row of the given (valid) region.
ObservableSet observables(const ModelConfig& config, Region region);

// Coherent-state expectation values at an arbitrary trial point:
// nu_s = r_s^2, A_kk = gamma_k^2 / Gamma_0^2.
ObservableSet point_observables(const ModelConfig& config, const VariationalPoint& p);

// Observables for a classification result, valid on both the analytic and the
// numeric-fallback path.
ObservableSet report_observables(const ModelConfig& config, const RegionReport& report);

struct MinimizeOutcome {
    VariationalPoint point;
    double energy = 0.0;
    long evaluations = 0;
};

// Charts searched by the numeric minimizer for this configuration.
std::vector<MatterChart> charts_for(Configuration kind);

// Default seed set: chart origin, analytic rows re-expressed in the chart,
// and 16 low-discrepancy points in [0,3]^5.
std::vector<VariationalPoint> default_seeds(const ModelConfig& config, MatterChart chart);

// Derivative-free minimization of the energy surface within one chart,
// restricted to the theta = phi = 0 branch. Moduli and field amplitudes are
// box-constrained to [0, 1e3]. Throws NoConvergence if no seed run converges
// within the evaluation cap.
MinimizeOutcome minimize_numeric(const ModelConfig& config, MatterChart chart,
                                 std::span<const VariationalPoint> seeds, double tol);
MinimizeOutcome minimize_numeric(const ModelConfig& config, MatterChart chart,
                                 double tol = 1e-13);

// Best outcome across all charts of the configuration.
MinimizeOutcome minimize_global(const ModelConfig& config, double tol = 1e-13);

}  // namespace dicke4
