#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "dicke4/model.hpp"
#include "dicke4/variational.hpp"

namespace dicke4 {

// One element of the truncated Fock (x) matter basis |nu1 nu2 n1 n2 n3 n4>.
struct BasisState {
    int nu1 = 0;
    int nu2 = 0;
    std::array<int, 4> n{0, 0, 0, 0};

    bool operator==(const BasisState&) const = default;
};

// total excitation M of the configuration
long excitation_m(Configuration kind, const BasisState& s);
// K3 = n4 + nu2 (lambda ladder of the Omega_2 mode)
long excitation_k3(const BasisState& s);

// Conserved-parity sector. Lambda uses both parities (ee, eo, oe, oo);
// NConfig uses the parity of M only (e, o).
struct Sector {
    int m_parity = 0;   // 0 even, 1 odd
    int k3_parity = 0;  // lambda only

    std::string name(Configuration kind) const;
    bool contains(Configuration kind, const BasisState& s) const;
};

// Fixed sector order: (ee, eo, oe, oo) for Lambda, (e, o) for NConfig.
std::vector<Sector> sectors(Configuration kind);

// All states with n1+..+n4 = Na, M <= M_max and the sector's parities,
// ordered lexicographically by (nu1, nu2, n2, n3, n4). Throws EmptySector
// when nothing survives the cuts.
std::vector<BasisState> enumerate_basis(const ModelConfig& config, const Sector& sector,
                                        int M_max);
// Same without the parity filter (all sectors merged); used by block-structure
// checks and coherent-state oracles.
std::vector<BasisState> enumerate_full_basis(const ModelConfig& config, int M_max);

// Real symmetric matrix stored as its upper triangle (col >= row).
struct SparseSymmetricMatrix {
    Eigen::SparseMatrix<double> upper;

    int dim() const { return static_cast<int>(upper.rows()); }
    // full symmetric matrix-vector product
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    // element (u, v) of the full matrix
    double element(int u, int v) const;
};

SparseSymmetricMatrix build_matrix(const ModelConfig& config,
                                   const std::vector<BasisState>& basis);

struct EigenOptions {
    double tol = 1e-10;      // residual bound |Hv - Ev| < tol * max(1, |E|)
    int dense_cutoff = 2000; // direct dense solve at or below this dimension
    int max_subspace = 350;  // Lanczos basis size per restart
    int max_restarts = 6;
};

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;
};

// Smallest eigenpair; dense path below the cutoff, Lanczos with full
// reorthogonalization above it. Throws NoConvergence when the residual bound
// cannot be met.
EigenPair lowest_eigenpair(const SparseSymmetricMatrix& matrix, const EigenOptions& opts);
EigenPair lowest_eigenpair(const SparseSymmetricMatrix& matrix, double tol);

struct SpectralResult {
    double energy = 0.0;       // lowest eigenvalue (total, not per particle)
    Eigen::VectorXd vector;    // unit-norm coefficients over `basis`
    std::vector<BasisState> basis;
    Sector sector;
    int M_max = 0;
    bool converged = true;
    bool sector_tie = false;
};

// Exact ground state at fixed truncation: solves every sector, returns the
// minimum (first sector in the fixed order on ties, tie flagged).
SpectralResult ground_state(const ModelConfig& config, int M_max, double tol = 1e-10);

// Raises M_max by M_step until the ground energy is stable to `tol`; returns
// the last result with converged=false if M_cap is hit.
SpectralResult converge(const ModelConfig& config, double tol = 1e-8, int M_start = 10,
                        int M_step = 10, int M_cap = 120);

// Per-particle expectation values over the ground-state vector.
ObservableSet quantum_observables(const ModelConfig& config, const SpectralResult& result);

}  // namespace dicke4
