// Single-particle coupling matrices for the four 1D network variants.
//
// Basis ordering is fixed everywhere as (1, 1bar, 2, 2bar, ..., L, Lbar): mode 2(i-1)
// is site i, mode 2(i-1)+1 is site ibar. Parity +1 (-1) marks the eigenvalue of the
// sublattice operator diag(1,-1,1,-1,...).
#pragma once

#include "topnet/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace topnet {

enum class ModelKind { bSSH, bMC, bBarrier, bProp };

inline std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::bSSH: return "bSSH";
        case ModelKind::bMC: return "bMC";
        case ModelKind::bBarrier: return "bBarrier";
        case ModelKind::bProp: return "bProp";
    }
    return "?";
}

inline ModelKind model_kind_from_string(const std::string& s) {
    if (s == "bSSH") return ModelKind::bSSH;
    if (s == "bMC") return ModelKind::bMC;
    if (s == "bBarrier") return ModelKind::bBarrier;
    if (s == "bProp") return ModelKind::bProp;
    throw SpecError("unknown model kind '" + s + "'");
}

struct NetworkSpec {
    ModelKind kind = ModelKind::bSSH;
    int L = 1;
    std::vector<double> w;      // intra-cell couplings, length L
    std::vector<double> t;      // inter-cell couplings, length L-1
    double delta = 0.0;         // uniform mode energy
    std::vector<double> omega;  // per-mode energies, length 2L (empty means delta everywhere)
    double omega_edge = 0.0;    // bBarrier only
    double omega_barrier = 0.0; // bBarrier only

    int dim() const { return 2 * L; }

    /// Per-mode energy including the omega/delta defaulting rule.
    double mode_energy(int mode) const {
        return omega.empty() ? delta : omega[static_cast<std::size_t>(mode)];
    }

    void validate() const {
        if (L < 1) throw SpecError("L must be a positive integer, got " + std::to_string(L));
        if (w.size() != static_cast<std::size_t>(L))
            throw SpecError("length(w) = " + std::to_string(w.size()) + " but L = " + std::to_string(L));
        if (t.size() != static_cast<std::size_t>(L - 1))
            throw SpecError("length(t) = " + std::to_string(t.size()) + " but L-1 = " + std::to_string(L - 1));
        if (!omega.empty() && omega.size() != static_cast<std::size_t>(2 * L))
            throw SpecError("length(omega) = " + std::to_string(omega.size()) + " but 2L = " + std::to_string(2 * L));
        if (delta < 0.0) throw SpecError("delta must be >= 0");
        auto finite = [](double x) { return std::isfinite(x); };
        if (!std::all_of(w.begin(), w.end(), finite) || !std::all_of(t.begin(), t.end(), finite) ||
            !std::all_of(omega.begin(), omega.end(), finite))
            throw SpecError("non-finite coupling or mode energy");
    }

    /// True when every mode sits at delta (the particle-hole constraint).
    bool ph_symmetric() const {
        return std::all_of(omega.begin(), omega.end(), [&](double x) { return x == delta; });
    }

    static NetworkSpec ssh(int L, double w, double t, double delta = 0.0) {
        NetworkSpec s;
        s.kind = ModelKind::bSSH;
        s.L = L;
        s.w.assign(static_cast<std::size_t>(std::max(L, 0)), w);
        s.t.assign(static_cast<std::size_t>(std::max(L - 1, 0)), t);
        s.delta = delta;
        return s;
    }

    static NetworkSpec majorana(int L, double domega, double t, double delta = 0.0) {
        NetworkSpec s = ssh(L, 0.5 * domega, t, delta);
        s.kind = ModelKind::bMC;
        return s;
    }

    static NetworkSpec barrier(int L, double tbar, double omega_edge, double omega_barrier) {
        NetworkSpec s = ssh(L, tbar, tbar, 0.0);
        s.kind = ModelKind::bBarrier;
        s.omega_edge = omega_edge;
        s.omega_barrier = omega_barrier;
        return s;
    }

    static NetworkSpec propagation(int L, double tbar, double omega_bar = 0.0) {
        NetworkSpec s = ssh(L, tbar, tbar, omega_bar);
        s.kind = ModelKind::bProp;
        return s;
    }
};

struct CouplingMatrix {
    ModelKind kind = ModelKind::bSSH;
    int L = 0;
    RealMatrix entries;
    std::vector<std::string> basis_labels;
    std::vector<int> parity;  // empty when the basis carries no definite sublattice parity
    double reference_energy = 0.0;  // delta, the centre of the symmetric spectrum
    bool claims_sublattice = false;
    std::vector<std::string> warnings;

    int dim() const { return static_cast<int>(entries.rows()); }
};

namespace detail {

inline std::vector<std::string> ssh_labels(int L) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(2 * L));
    for (int i = 1; i <= L; ++i) {
        labels.push_back(std::to_string(i));
        labels.push_back(std::to_string(i) + "bar");
    }
    return labels;
}

inline std::vector<int> ssh_parity(int L) {
    std::vector<int> p(static_cast<std::size_t>(2 * L));
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = (k % 2 == 0) ? +1 : -1;
    return p;
}

// Tridiagonal chain over the 2L modes with bonds w_1, t_1, w_2, ..., w_L.
inline RealMatrix chain_matrix(const NetworkSpec& spec) {
    const int n = spec.dim();
    RealMatrix h = RealMatrix::Zero(n, n);
    for (int i = 0; i < spec.L; ++i) {
        h(2 * i, 2 * i + 1) = h(2 * i + 1, 2 * i) = spec.w[static_cast<std::size_t>(i)];
        if (i + 1 < spec.L) h(2 * i + 1, 2 * i + 2) = h(2 * i + 2, 2 * i + 1) = spec.t[static_cast<std::size_t>(i)];
    }
    for (int k = 0; k < n; ++k) h(k, k) = spec.mode_energy(k);
    return h;
}

inline void require_kind(const NetworkSpec& spec, ModelKind expected) {
    if (spec.kind != expected)
        throw SpecError("builder for " + to_string(expected) + " called with kind " + to_string(spec.kind));
}

}  // namespace detail

/// bSSH: w_i between (i, ibar), t_i between (ibar, i+1), omega on the diagonal.
inline CouplingMatrix build_bssh(const NetworkSpec& spec) {
    detail::require_kind(spec, ModelKind::bSSH);
    spec.validate();
    CouplingMatrix m;
    m.kind = spec.kind;
    m.L = spec.L;
    m.entries = detail::chain_matrix(spec);
    m.basis_labels = detail::ssh_labels(spec.L);
    m.parity = detail::ssh_parity(spec.L);
    m.reference_energy = spec.delta;
    m.claims_sublattice = spec.ph_symmetric();
    return m;
}

/// bMC ladder. Each cell carries two modes (i,+) and (i,-) with energies
/// delta - domega_i/2 and delta + domega_i/2 (domega_i = 2 w_i); neighbouring cells are
/// linked by tunnelings of magnitude t_i/2 with sign -1 only on the (i,-)-(i+1,.) links.
/// This is the cell-wise rotation b_i = ((i,+) + (i,-))/sqrt2, b_ibar = ((i,-) - (i,+))/sqrt2
/// of the bSSH chain, so both spectra coincide.
inline CouplingMatrix build_bmc(const NetworkSpec& spec) {
    detail::require_kind(spec, ModelKind::bMC);
    spec.validate();
    const int n = spec.dim();
    CouplingMatrix m;
    m.kind = spec.kind;
    m.L = spec.L;
    m.entries = RealMatrix::Zero(n, n);
    for (int i = 0; i < spec.L; ++i) {
        const double wi = spec.w[static_cast<std::size_t>(i)];
        const int plus = 2 * i, minus = 2 * i + 1;
        // Diagonal in the rotated basis: H_cell = P^T [[w_delta, w],[w, w_delta]] P.
        const double ep = spec.mode_energy(plus), em = spec.mode_energy(minus);
        m.entries(plus, plus) = 0.5 * (ep + em) - wi;
        m.entries(minus, minus) = 0.5 * (ep + em) + wi;
        m.entries(plus, minus) = m.entries(minus, plus) = 0.5 * (ep - em);
        if (i + 1 < spec.L) {
            const double half = 0.5 * spec.t[static_cast<std::size_t>(i)];
            const int nplus = 2 * i + 2, nminus = 2 * i + 3;
            // b_ibar^dag b_{i+1}: ((i,-) - (i,+))/sqrt2 times ((i+1,+) + (i+1,-))/sqrt2
            m.entries(minus, nplus) = m.entries(nplus, minus) = half;
            m.entries(minus, nminus) = m.entries(nminus, minus) = half;
            m.entries(plus, nplus) = m.entries(nplus, plus) = -half;
            m.entries(plus, nminus) = m.entries(nminus, plus) = -half;
        }
        m.basis_labels.push_back(std::to_string(i + 1) + "+");
        m.basis_labels.push_back(std::to_string(i + 1) + "-");
    }
    m.reference_energy = spec.delta;
    m.claims_sublattice = false;
    return m;
}

/// Barrier chain: omega_edge on modes 1 and Lbar, omega_barrier on the 2L-2 interior
/// modes, uniform couplings (all w_i and t_i must be equal).
inline CouplingMatrix build_barrier(const NetworkSpec& spec) {
    detail::require_kind(spec, ModelKind::bBarrier);
    spec.validate();
    if (spec.L < 2) throw SpecError("barrier chain needs L >= 2");
    const double tbar = spec.w.front();
    auto same = [&](double x) { return x == tbar; };
    if (!std::all_of(spec.w.begin(), spec.w.end(), same) || !std::all_of(spec.t.begin(), spec.t.end(), same))
        throw SpecError("barrier chain requires uniform couplings tbar = wbar");
    NetworkSpec shaped = spec;
    shaped.omega.assign(static_cast<std::size_t>(spec.dim()), spec.omega_barrier);
    shaped.omega.front() = shaped.omega.back() = spec.omega_edge;
    CouplingMatrix m;
    m.kind = spec.kind;
    m.L = spec.L;
    m.entries = detail::chain_matrix(shaped);
    m.basis_labels = detail::ssh_labels(spec.L);
    m.parity = detail::ssh_parity(spec.L);
    m.reference_energy = spec.omega_edge;
    m.claims_sublattice = false;
    if (spec.omega_barrier <= spec.omega_edge)
        m.warnings.push_back("omega_barrier <= omega_edge: edge modes are no longer below the barrier band");
    return m;
}

/// Free-propagation chain: every mode at omega_bar (= delta), every coupling tbar.
inline CouplingMatrix build_prop(const NetworkSpec& spec) {
    detail::require_kind(spec, ModelKind::bProp);
    spec.validate();
    const double tbar = spec.w.front();
    auto same = [&](double x) { return x == tbar; };
    if (!std::all_of(spec.w.begin(), spec.w.end(), same) || !std::all_of(spec.t.begin(), spec.t.end(), same))
        throw SpecError("propagation chain requires uniform couplings");
    CouplingMatrix m;
    m.kind = spec.kind;
    m.L = spec.L;
    m.entries = detail::chain_matrix(spec);
    m.basis_labels = detail::ssh_labels(spec.L);
    m.parity = detail::ssh_parity(spec.L);
    m.reference_energy = spec.delta;
    m.claims_sublattice = spec.ph_symmetric();
    return m;
}

inline CouplingMatrix build(const NetworkSpec& spec) {
    switch (spec.kind) {
        case ModelKind::bSSH: return build_bssh(spec);
        case ModelKind::bMC: return build_bmc(spec);
        case ModelKind::bBarrier: return build_barrier(spec);
        case ModelKind::bProp: return build_prop(spec);
    }
    throw SpecError("unknown model kind");
}

/// Maximum of |H - H^T|.
inline double symmetry_defect(const RealMatrix& h) {
    return (h - h.transpose()).cwiseAbs().maxCoeff();
}

/// max |U (H - delta) U + (H - delta)| for a diagonal parity operator U.
inline double sublattice_defect(const RealMatrix& h, const std::vector<int>& parity, double delta) {
    const auto n = h.rows();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double centred = h(i, j) - (i == j ? delta : 0.0);
            const double flipped = parity[static_cast<std::size_t>(i)] * parity[static_cast<std::size_t>(j)] * centred;
            worst = std::max(worst, std::abs(flipped + centred));
        }
    return worst;
}

enum class Edge { left, right };

/// The exact sweet-spot edge mode: unit vector on mode 1 (left) or Lbar (right),
/// expressed in the model's own basis.
inline ComplexVector edge_state(ModelKind kind, int L, Edge side) {
    const int n = 2 * L;
    ComplexVector v = ComplexVector::Zero(n);
    if (kind == ModelKind::bMC) {
        const double r = 1.0 / std::sqrt(2.0);
        if (side == Edge::left) {
            v(0) = r;
            v(1) = r;
        } else {
            v(n - 2) = -r;
            v(n - 1) = r;
        }
        return v;
    }
    v(side == Edge::left ? 0 : n - 1) = 1.0;
    return v;
}

}  // namespace topnet
