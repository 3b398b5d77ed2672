#pragma once

#include <array>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "dicke4/error.hpp"

namespace dicke4 {

// Which 4-level coupling scheme the two field modes drive.
enum class Configuration { Lambda, NConfig };

std::string_view configuration_name(Configuration kind);  // "lambda" | "n"

// One dipolar transition lower <-> upper promoted by a single mode.
struct CouplingEdge {
    int lower = 1;
    int upper = 2;
    int mode = 1;  // 1 or 2
};

// Physical parameters, dimensionless with hbar = 1. Treated as immutable
// after validate(); safe to share across workers.
struct ModelConfig {
    Configuration kind = Configuration::Lambda;
    std::array<double, 2> Omega{1.0, 1.0};            // mode frequencies, > 0
    std::array<double, 4> omega{0.0, 0.0, 0.0, 0.0};  // level frequencies, ascending
    std::map<std::pair<int, int>, double> mu;         // dipolar strengths, keys = coupling edges
    int Na = 1;                                       // atom count

    double mu_at(int i, int j) const;
    // omega_j - omega_i with 1-based level indices.
    double gap(int j, int i) const { return omega[j - 1] - omega[i - 1]; }
};

// The fixed coupling graph of each configuration, in a stable order.
const std::vector<CouplingEdge>& coupling_edges(Configuration kind);

// Enforces every ModelConfig invariant; returns the config unchanged on success.
// Throws Error with OrderingViolation, BadCouplingKeys, NonPositiveFrequency,
// NegativeCoupling or BadAtomCount.
ModelConfig validate(ModelConfig config);

// Phase-region labels. Norm is shared; the collective labels depend on kind:
// Lambda uses {SLambda, S23, S34}, NConfig uses {S13, S23, S24}.
enum class Region { Norm, SLambda, S23, S34, S13, S24 };

std::string_view region_name(Region r);
std::vector<Region> region_labels(Configuration kind);
bool region_valid_for(Configuration kind, Region r);

// Tie-break order at exact separatrix samples: larger = more excited structure.
int excitation_rank(Region r);

// Integer-coefficient linear form over (nu1, nu2, n1..n4) whose parity
// commutes with the Hamiltonian.
struct LinearDiagonalForm {
    std::string_view name;
    std::array<int, 6> coeff{};

    long evaluate(long nu1, long nu2, long n1, long n2, long n3, long n4) const {
        return coeff[0] * nu1 + coeff[1] * nu2 + coeff[2] * n1 + coeff[3] * n2 +
               coeff[4] * n3 + coeff[5] * n4;
    }
};

// Lambda: K1, K2, K3 and the total excitation M = 2K3 + K2.
// NConfig: M only.
std::vector<LinearDiagonalForm> conserved_quantities(Configuration kind);

}  // namespace dicke4
