#include "dicke4/model.hpp"

#include <cmath>
#include <sstream>

namespace dicke4 {

std::string_view configuration_name(Configuration kind) {
    return kind == Configuration::Lambda ? "lambda" : "n";
}

double ModelConfig::mu_at(int i, int j) const {
    auto it = mu.find({i, j});
    if (it == mu.end()) {
        std::ostringstream os;
        os << "no coupling mu_" << i << j << " in this configuration";
        throw Error(Errc::BadCouplingKeys, os.str());
    }
    return it->second;
}

const std::vector<CouplingEdge>& coupling_edges(Configuration kind) {
    static const std::vector<CouplingEdge> lambda{{1, 3, 1}, {2, 3, 1}, {3, 4, 2}};
    static const std::vector<CouplingEdge> nconf{{1, 3, 1}, {2, 3, 2}, {2, 4, 1}};
    return kind == Configuration::Lambda ? lambda : nconf;
}

ModelConfig validate(ModelConfig config) {
    for (int s = 0; s < 2; ++s) {
        if (!(config.Omega[s] > 0.0) || !std::isfinite(config.Omega[s])) {
            std::ostringstream os;
            os << "Omega." << s + 1 << " must be a positive finite number, got "
               << config.Omega[s];
            throw Error(Errc::NonPositiveFrequency, os.str());
        }
    }
    for (int k = 0; k < 4; ++k) {
        if (!std::isfinite(config.omega[k]))
            throw Error(Errc::OrderingViolation, "omega must be finite");
    }
    for (int k = 0; k < 3; ++k) {
        if (config.omega[k] > config.omega[k + 1]) {
            std::ostringstream os;
            os << "omega." << k + 1 << " > omega." << k + 2
               << " violates the ascending level convention";
            throw Error(Errc::OrderingViolation, os.str());
        }
    }
    if (config.Na < 1) throw Error(Errc::BadAtomCount, "Na must be a positive integer");

    const auto& edges = coupling_edges(config.kind);
    if (config.mu.size() != edges.size())
        throw Error(Errc::BadCouplingKeys, "mu must have exactly one entry per coupling edge");
    for (const auto& e : edges) {
        auto it = config.mu.find({e.lower, e.upper});
        if (it == config.mu.end()) {
            std::ostringstream os;
            os << "mu." << e.lower << e.upper << " missing for configuration "
               << configuration_name(config.kind);
            throw Error(Errc::BadCouplingKeys, os.str());
        }
        if (!(it->second >= 0.0) || !std::isfinite(it->second)) {
            std::ostringstream os;
            os << "mu." << e.lower << e.upper << " must be finite and >= 0, got " << it->second;
            throw Error(Errc::NegativeCoupling, os.str());
        }
    }
    return config;
}

std::string_view region_name(Region r) {
    switch (r) {
        case Region::Norm: return "S_norm";
        case Region::SLambda: return "S_Lambda";
        case Region::S23: return "S_23";
        case Region::S34: return "S_34";
        case Region::S13: return "S_13";
        case Region::S24: return "S_24";
    }
    return "?";
}

std::vector<Region> region_labels(Configuration kind) {
    if (kind == Configuration::Lambda)
        return {Region::Norm, Region::SLambda, Region::S23, Region::S34};
    return {Region::Norm, Region::S13, Region::S23, Region::S24};
}

bool region_valid_for(Configuration kind, Region r) {
    for (Region s : region_labels(kind))
        if (s == r) return true;
    return false;
}

int excitation_rank(Region r) {
    switch (r) {
        case Region::Norm: return 0;
        case Region::SLambda: return 1;
        case Region::S13: return 1;
        case Region::S23: return 2;
        case Region::S34: return 3;
        case Region::S24: return 3;
    }
    return 0;
}

std::vector<LinearDiagonalForm> conserved_quantities(Configuration kind) {
    if (kind == Configuration::Lambda) {
        return {
            {"K1", {-1, 0, 1, 1, 0, 0}},
            {"K2", {1, -1, 0, 0, 1, 0}},
            {"K3", {0, 1, 0, 0, 0, 1}},
            {"M", {1, 1, 0, 0, 1, 2}},
        };
    }
    return {
        {"M", {1, 1, 0, 0, 1, 1}},
    };
}

}  // namespace dicke4
