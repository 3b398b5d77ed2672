#include "dicke4/quantum.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <unordered_map>

namespace dicke4 {

namespace {

// Keep the LAPACK backend single-threaded: callers parallelize across scan
// points and sector solves, and per-call determinism matters for the CLI.
struct BlasThreadPin {
    BlasThreadPin() { setenv("OPENBLAS_NUM_THREADS", "1", 0); }
} blas_thread_pin;

std::uint64_t pack_state(const BasisState& s) {
    return (static_cast<std::uint64_t>(s.nu1) << 48) | (static_cast<std::uint64_t>(s.nu2) << 32) |
           (static_cast<std::uint64_t>(s.n[0]) << 24) | (static_cast<std::uint64_t>(s.n[1]) << 16) |
           (static_cast<std::uint64_t>(s.n[2]) << 8) | static_cast<std::uint64_t>(s.n[3]);
}

bool lex_less(const BasisState& a, const BasisState& b) {
    auto key = [](const BasisState& s) {
        return std::array<int, 5>{s.nu1, s.nu2, s.n[1], s.n[2], s.n[3]};
    };
    return key(a) < key(b);
}

}  // namespace

long excitation_m(Configuration kind, const BasisState& s) {
    if (kind == Configuration::Lambda) return s.nu1 + s.nu2 + s.n[2] + 2L * s.n[3];
    return s.nu1 + s.nu2 + s.n[2] + s.n[3];
}

long excitation_k3(const BasisState& s) { return s.n[3] + s.nu2; }

std::string Sector::name(Configuration kind) const {
    std::string out(1, m_parity == 0 ? 'e' : 'o');
    if (kind == Configuration::Lambda) out += k3_parity == 0 ? 'e' : 'o';
    return out;
}

bool Sector::contains(Configuration kind, const BasisState& s) const {
    if (excitation_m(kind, s) % 2 != m_parity) return false;
    if (kind == Configuration::Lambda && excitation_k3(s) % 2 != k3_parity) return false;
    return true;
}

std::vector<Sector> sectors(Configuration kind) {
    if (kind == Configuration::Lambda) return {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    return {{0, 0}, {1, 0}};
}

namespace {

std::vector<BasisState> enumerate_impl(const ModelConfig& config, const Sector* sector,
                                       int M_max) {
    const int Na = config.Na;
    std::vector<BasisState> out;
    for (int n2 = 0; n2 <= Na; ++n2)
        for (int n3 = 0; n3 + n2 <= Na; ++n3)
            for (int n4 = 0; n4 + n3 + n2 <= Na; ++n4) {
                BasisState s;
                s.n = {Na - n2 - n3 - n4, n2, n3, n4};
                long base = excitation_m(config.kind, s);
                if (base > M_max) continue;
                for (int nu1 = 0; nu1 <= M_max - base; ++nu1)
                    for (int nu2 = 0; nu1 + nu2 <= M_max - base; ++nu2) {
                        s.nu1 = nu1;
                        s.nu2 = nu2;
                        if (sector && !sector->contains(config.kind, s)) continue;
                        out.push_back(s);
                    }
            }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

}  // namespace

std::vector<BasisState> enumerate_basis(const ModelConfig& config, const Sector& sector,
                                        int M_max) {
    auto out = enumerate_impl(config, &sector, M_max);
    if (out.empty()) {
        std::ostringstream os;
        os << "sector " << sector.name(config.kind) << " is empty at M_max = " << M_max;
        throw Error(Errc::EmptySector, os.str());
    }
    return out;
}

std::vector<BasisState> enumerate_full_basis(const ModelConfig& config, int M_max) {
    return enumerate_impl(config, nullptr, M_max);
}

Eigen::VectorXd SparseSymmetricMatrix::apply(const Eigen::VectorXd& x) const {
    return upper.selfadjointView<Eigen::Upper>() * x;
}

double SparseSymmetricMatrix::element(int u, int v) const {
    return upper.coeff(std::min(u, v), std::max(u, v));
}

SparseSymmetricMatrix build_matrix(const ModelConfig& config,
                                   const std::vector<BasisState>& basis) {
    const int dim = static_cast<int>(basis.size());
    const double inv_sqrt_na = 1.0 / std::sqrt(static_cast<double>(config.Na));

    std::unordered_map<std::uint64_t, int> index;
    index.reserve(basis.size() * 2);
    for (int i = 0; i < dim; ++i) {
        const auto& s = basis[i];
        if (s.n[0] + s.n[1] + s.n[2] + s.n[3] != config.Na)
            throw Error(Errc::InconsistentBasis, "basis state atom count != Na");
        if (!index.emplace(pack_state(s), i).second)
            throw Error(Errc::InconsistentBasis, "duplicate basis state");
    }

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(basis.size() * 8);
    for (int i = 0; i < dim; ++i) {
        const auto& s = basis[i];
        double diag = config.Omega[0] * s.nu1 + config.Omega[1] * s.nu2;
        for (int k = 0; k < 4; ++k) diag += config.omega[k] * s.n[k];
        trip.emplace_back(i, i, diag);

        for (const auto& edge : coupling_edges(config.kind)) {
            double mu = config.mu_at(edge.lower, edge.upper);
            if (mu == 0.0) continue;
            // A_ij moves one atom src -> dst; the mode ladder adds/removes a photon
            const int pairs[2][2] = {{edge.upper, edge.lower}, {edge.lower, edge.upper}};
            for (const auto& pr : pairs) {
                int src = pr[0] - 1, dst = pr[1] - 1;
                if (s.n[src] == 0) continue;
                double amp_m = std::sqrt(static_cast<double>(s.n[src]) * (s.n[dst] + 1));
                BasisState t = s;
                --t.n[src];
                ++t.n[dst];
                int nu = edge.mode == 1 ? s.nu1 : s.nu2;
                for (int dph : {+1, -1}) {
                    if (nu + dph < 0) continue;
                    (edge.mode == 1 ? t.nu1 : t.nu2) = nu + dph;
                    double amp_f = dph > 0 ? std::sqrt(nu + 1.0) : std::sqrt(nu);
                    auto it = index.find(pack_state(t));
                    if (it == index.end()) continue;  // outside the truncation
                    if (it->second >= i)
                        trip.emplace_back(i, it->second, -mu * inv_sqrt_na * amp_m * amp_f);
                }
            }
        }
    }

    SparseSymmetricMatrix m;
    m.upper.resize(dim, dim);
    m.upper.setFromTriplets(trip.begin(), trip.end());
    m.upper.makeCompressed();
    return m;
}

namespace {

void canonical_sign(Eigen::VectorXd& v) {
    int imax = 0;
    for (int i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (v[imax] < 0) v = -v;
}

bool residual_ok(const SparseSymmetricMatrix& m, const EigenPair& p, double tol) {
    double r = (m.apply(p.vector) - p.value * p.vector).norm();
    return r < tol * std::max(1.0, std::abs(p.value));
}

EigenPair dense_lowest(const SparseSymmetricMatrix& m) {
    const int n = m.dim();
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    for (int col = 0; col < m.upper.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m.upper, col); it; ++it) {
            a[it.row() + static_cast<std::size_t>(col) * n] = it.value();
            a[col + static_cast<std::size_t>(it.row()) * n] = it.value();
        }
    std::vector<double> w(n), z(n);
    std::vector<lapack_int> isuppz(2);
    lapack_int found = 0;
    lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0,
                                     1, 1, 0.0, &found, w.data(), z.data(), n, isuppz.data());
    if (info != 0 || found < 1)
        throw Error(Errc::NoConvergence, "dsyevr failed with info " + std::to_string(info));
    EigenPair p;
    p.value = w[0];
    p.vector = Eigen::Map<Eigen::VectorXd>(z.data(), n);
    p.vector.normalize();
    canonical_sign(p.vector);
    return p;
}

// Lanczos with full reorthogonalization against the stored Krylov basis.
EigenPair lanczos_lowest(const SparseSymmetricMatrix& m, const EigenOptions& opts) {
    const int n = m.dim();
    const int mmax = std::min(n, opts.max_subspace);

    // deterministic start vector
    std::mt19937 gen(0x9e3779b9u ^ static_cast<unsigned>(n));
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd v0(n);
    for (int i = 0; i < n; ++i) v0[i] = dist(gen);
    v0.normalize();

    for (int restart = 0; restart < opts.max_restarts; ++restart) {
        Eigen::MatrixXd Q(n, mmax);
        std::vector<double> alpha, beta;  // tridiagonal entries
        Q.col(0) = v0;
        Eigen::VectorXd w;
        EigenPair best;
        bool have_ritz = false;

        for (int k = 0; k < mmax; ++k) {
            w = m.apply(Q.col(k));
            if (k > 0) w -= beta[k - 1] * Q.col(k - 1);
            double a = Q.col(k).dot(w);
            alpha.push_back(a);
            w -= a * Q.col(k);
            // two-pass reorthogonalization
            for (int pass = 0; pass < 2; ++pass)
                w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).transpose() * w);
            double b = w.norm();

            // Ritz estimate from the current tridiagonal
            const int kk = k + 1;
            std::vector<double> d(alpha), e(beta), zt(static_cast<std::size_t>(kk) * kk);
            e.resize(kk, 0.0);
            std::vector<lapack_int> isuppz(2);
            lapack_int found = 0;
            std::vector<double> wv(kk);
            lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', kk, d.data(), e.data(),
                                             0.0, 0.0, 1, 1, 0.0, &found, wv.data(), zt.data(),
                                             kk, isuppz.data());
            if (info == 0 && found >= 1) {
                double theta = wv[0];
                double resid_est = b * std::abs(zt[kk - 1]);
                if (resid_est < 0.5 * opts.tol * std::max(1.0, std::abs(theta)) || b < 1e-14 ||
                    k == mmax - 1) {
                    Eigen::Map<Eigen::VectorXd> s(zt.data(), kk);
                    best.value = theta;
                    best.vector = Q.leftCols(kk) * s;
                    best.vector.normalize();
                    have_ritz = true;
                    if (residual_ok(m, best, opts.tol)) {
                        canonical_sign(best.vector);
                        return best;
                    }
                    if (b < 1e-14) break;  // invariant subspace, restart from Ritz vector
                }
            }
            if (b < 1e-14) break;
            if (k + 1 < mmax) Q.col(k + 1) = w / b;
            beta.push_back(b);
        }
        if (have_ritz) v0 = best.vector;  // warm restart
    }
    // dense rescue for manageable dimensions; residual is still checked by the caller
    if (n <= 3000) return dense_lowest(m);
    throw Error(Errc::NoConvergence, "Lanczos did not reach the residual tolerance");
}

}  // namespace

EigenPair lowest_eigenpair(const SparseSymmetricMatrix& m, const EigenOptions& opts) {
    const int n = m.dim();
    if (n < 1) throw Error(Errc::InconsistentBasis, "empty matrix");

    // diagonal matrices are solved exactly (also fixes the degenerate mu = 0
    // case to a deterministic basis vector)
    bool diagonal = true;
    for (int col = 0; col < m.upper.outerSize() && diagonal; ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m.upper, col); it; ++it)
            if (it.row() != it.col() && it.value() != 0.0) {
                diagonal = false;
                break;
            }
    if (diagonal) {
        int imin = 0;
        double vmin = m.element(0, 0);
        for (int i = 1; i < n; ++i)
            if (m.element(i, i) < vmin) {
                vmin = m.element(i, i);
                imin = i;
            }
        EigenPair p;
        p.value = vmin;
        p.vector = Eigen::VectorXd::Zero(n);
        p.vector[imin] = 1.0;
        return p;
    }

    EigenPair p = n <= opts.dense_cutoff ? dense_lowest(m) : lanczos_lowest(m, opts);
    if (!residual_ok(m, p, opts.tol))
        throw Error(Errc::NoConvergence, "eigenpair residual above tolerance");
    return p;
}

EigenPair lowest_eigenpair(const SparseSymmetricMatrix& m, double tol) {
    EigenOptions opts;
    opts.tol = tol;
    return lowest_eigenpair(m, opts);
}

SpectralResult ground_state(const ModelConfig& config, int M_max, double tol) {
    EigenOptions opts;
    opts.tol = tol;
    // production driver prefers the Lanczos path early: the convergence ladder
    // re-solves every sector at each truncation, and the iterative path with
    // dense rescue meets the same residual contract at a fraction of the cost
    opts.dense_cutoff = 400;

    SpectralResult best;
    bool have = false;
    for (const Sector& sec : sectors(config.kind)) {
        std::vector<BasisState> basis;
        try {
            basis = enumerate_basis(config, sec, M_max);
        } catch (const Error& e) {
            if (e.code == Errc::EmptySector) continue;
            throw;
        }
        auto H = build_matrix(config, basis);
        auto pair = lowest_eigenpair(H, opts);
        if (!have) {
            best = {pair.value, pair.vector, std::move(basis), sec, M_max, true, false};
            have = true;
        } else if (pair.value < best.energy - 1e-12) {
            best = {pair.value, pair.vector, std::move(basis), sec, M_max, true,
                    best.sector_tie};
        } else if (std::abs(pair.value - best.energy) <= 1e-12) {
            best.sector_tie = true;  // keep the earlier sector
        }
    }
    if (!have) throw Error(Errc::EmptySector, "all sectors empty at this truncation");
    return best;
}

SpectralResult converge(const ModelConfig& config, double tol, int M_start, int M_step,
                        int M_cap) {
    SpectralResult prev;
    bool have_prev = false;
    for (int M = M_start; M <= M_cap; M += M_step) {
        SpectralResult cur = ground_state(config, M);
        if (have_prev) {
            if (cur.energy > prev.energy + 1e-12)
                throw std::logic_error("ground energy increased under basis enlargement");
            if (std::abs(cur.energy - prev.energy) < tol) {
                // converged at the earlier truncation already
                prev.converged = true;
                return prev;
            }
        }
        prev = std::move(cur);
        have_prev = true;
    }
    prev.converged = false;
    return prev;
}

ObservableSet quantum_observables(const ModelConfig& config, const SpectralResult& result) {
    const double na = static_cast<double>(config.Na);
    ObservableSet obs;
    obs.energy = result.energy / na;
    for (int i = 0; i < result.vector.size(); ++i) {
        double p = result.vector[i] * result.vector[i];
        const auto& s = result.basis[i];
        obs.nu1 += p * s.nu1 / na;
        obs.nu2 += p * s.nu2 / na;
        for (int k = 0; k < 4; ++k) obs.A[k] += p * s.n[k] / na;
    }
    return obs;
}

}  // namespace dicke4
