// Dimerized 2D networks: parallel SSH chains with inter-chain couplings, optional
// emanating SSH stubs, path activation between terminals and the same-parity scan.
#pragma once

#include "topnet/dynamics.hpp"

#include <map>
#include <set>

namespace topnet {

enum class Geometry { boundary_terminals, emanating_chains };

inline std::string to_string(Geometry g) {
    return g == Geometry::boundary_terminals ? "boundary_terminals" : "emanating_chains";
}

inline Geometry geometry_from_string(const std::string& s) {
    if (s == "boundary_terminals") return Geometry::boundary_terminals;
    if (s == "emanating_chains") return Geometry::emanating_chains;
    throw SpecError("unknown lattice geometry '" + s + "'");
}

enum class BondKind { intra_w, intra_t, cross, stub_w, stub_t, stub_link, same_parity };

inline std::string to_string(BondKind k) {
    switch (k) {
        case BondKind::intra_w: return "intra_w";
        case BondKind::intra_t: return "intra_t";
        case BondKind::cross: return "cross";
        case BondKind::stub_w: return "stub_w";
        case BondKind::stub_t: return "stub_t";
        case BondKind::stub_link: return "stub_link";
        case BondKind::same_parity: return "same_parity";
    }
    return "?";
}

struct LatticeNode {
    int row = 0;
    int col = 0;       // position along the chain, or along the stub counted from the free end
    int parity = 0;    // 0 even, 1 odd
    int stub = -1;     // owning stub, -1 for bulk nodes
    std::string label;
};

struct LatticeBond {
    int a = 0;
    int b = 0;
    double amplitude = 0.0;
    BondKind kind = BondKind::intra_w;
    int stub = -1;
};

struct Terminal {
    int node = 0;
    std::string qubit;
};

struct LatticeParams {
    double w = 0.0;        // static intra-cell coupling
    double tbar = 1.0;
    double cross = 1.0;    // inter-chain coupling, in units of tbar
    int stub_cells = 3;
    double stub_w = 0.0;
};

struct Lattice2D {
    int rows = 1;
    int cols = 1;
    Geometry geometry = Geometry::boundary_terminals;
    LatticeParams params;
    std::vector<LatticeNode> nodes;
    std::vector<LatticeBond> bonds;
    std::vector<Terminal> terminals;

    int size() const { return static_cast<int>(nodes.size()); }
    int bulk_index(int r, int j) const { return r * 2 * cols + j; }

    RealMatrix matrix() const {
        RealMatrix h = RealMatrix::Zero(size(), size());
        for (const auto& b : bonds) {
            h(b.a, b.b) += b.amplitude;
            h(b.b, b.a) += b.amplitude;
        }
        return h;
    }

    std::vector<int> parity() const {
        std::vector<int> p;
        for (const auto& n : nodes) p.push_back(n.parity == 0 ? 1 : -1);
        return p;
    }

    /// Number of bonds joining equal-parity nodes.
    int same_parity_bonds() const {
        int n = 0;
        for (const auto& b : bonds) n += nodes[b.a].parity == nodes[b.b].parity;
        return n;
    }

    bool bipartite() const { return same_parity_bonds() == 0; }

    const Terminal& terminal(int index) const {
        if (index < 0 || index >= static_cast<int>(terminals.size()))
            throw std::out_of_range("unknown terminal index " + std::to_string(index));
        return terminals[static_cast<std::size_t>(index)];
    }

    int terminal_parity(int index) const { return nodes[terminal(index).node].parity; }

    /// Index of the bond joining a and b, or -1.
    int find_bond(int a, int b) const {
        for (std::size_t k = 0; k < bonds.size(); ++k)
            if ((bonds[k].a == a && bonds[k].b == b) || (bonds[k].a == b && bonds[k].b == a)) return static_cast<int>(k);
        return -1;
    }
};

namespace detail {

inline void add_stub(Lattice2D& lat, int attach, const std::string& qubit) {
    const int sid = static_cast<int>(lat.terminals.size());
    const int n = 2 * lat.params.stub_cells;
    const int parity = lat.nodes[static_cast<std::size_t>(attach)].parity;
    const int first = lat.size();
    for (int k = 0; k < n; ++k) {
        LatticeNode node;
        node.row = lat.nodes[static_cast<std::size_t>(attach)].row;
        node.col = k;
        node.parity = (parity + n - k) % 2;
        node.stub = sid;
        node.label = qubit + ":" + std::to_string(k);
        lat.nodes.push_back(node);
    }
    for (int k = 0; k + 1 < n; ++k) {
        const bool w = k % 2 == 0;
        lat.bonds.push_back({first + k, first + k + 1, w ? lat.params.stub_w : lat.params.tbar,
                             w ? BondKind::stub_w : BondKind::stub_t, sid});
    }
    lat.bonds.push_back({first + n - 1, attach, lat.params.tbar, BondKind::stub_link, sid});
    lat.terminals.push_back({first, qubit});
}

}  // namespace detail

/// rows parallel SSH chains of `cols` unit cells; node (r, j), j = 0 .. 2 cols - 1, has
/// parity (r + j) mod 2. Inter-chain bonds join (r, j) and (r + 1, j) for interior j
/// with r + j even. Terminals are the chain ends, or the free ends of emanating stubs.
inline Lattice2D build_honeycomb(int rows, int cols, Geometry geometry, LatticeParams params = {}) {
    if (rows < 1 || cols < 1) throw SpecError("lattice needs rows, cols >= 1");
    if (params.stub_cells < 1) throw SpecError("stub_cells must be >= 1");
    Lattice2D lat;
    lat.rows = rows;
    lat.cols = cols;
    lat.geometry = geometry;
    lat.params = params;
    const int m = 2 * cols;
    for (int r = 0; r < rows; ++r)
        for (int j = 0; j < m; ++j)
            lat.nodes.push_back({r, j, (r + j) % 2, -1,
                                 "(" + std::to_string(r) + "," + std::to_string(j) + ")"});
    for (int r = 0; r < rows; ++r)
        for (int j = 0; j + 1 < m; ++j) {
            const bool w = j % 2 == 0;
            lat.bonds.push_back({lat.bulk_index(r, j), lat.bulk_index(r, j + 1), w ? params.w : params.tbar,
                                 w ? BondKind::intra_w : BondKind::intra_t, -1});
        }
    for (int r = 0; r + 1 < rows; ++r)
        for (int j = 1; j + 1 < m; ++j)
            if ((r + j) % 2 == 0)
                lat.bonds.push_back({lat.bulk_index(r, j), lat.bulk_index(r + 1, j), params.cross * params.tbar,
                                     BondKind::cross, -1});
    for (int r = 0; r < rows; ++r) {
        const std::string left = "L" + std::to_string(r), right = "R" + std::to_string(r);
        if (geometry == Geometry::boundary_terminals) {
            lat.terminals.push_back({lat.bulk_index(r, 0), left});
            lat.terminals.push_back({lat.bulk_index(r, m - 1), right});
        } else {
            detail::add_stub(lat, lat.bulk_index(r, 0), left);
            detail::add_stub(lat, lat.bulk_index(r, m - 1), right);
        }
    }
    return lat;
}

/// Ablation: next-nearest couplings (r, j) - (r, j + 2) along every chain. These join
/// equal-parity nodes and break the sublattice symmetry.
inline Lattice2D with_same_parity_couplings(Lattice2D lat, double amplitude) {
    for (int r = 0; r < lat.rows; ++r)
        for (int j = 0; j + 2 < 2 * lat.cols; ++j)
            lat.bonds.push_back({lat.bulk_index(r, j), lat.bulk_index(r, j + 2), amplitude, BondKind::same_parity, -1});
    return lat;
}

enum class PathParity { feasible, obstructed };

inline std::string to_string(PathParity p) { return p == PathParity::feasible ? "feasible" : "obstructed"; }

/// Opposite parity is necessary for a transfer; equal terminals count as obstructed.
inline PathParity check_path_parity(const Lattice2D& lat, int terminal_a, int terminal_b) {
    const int pa = lat.terminal_parity(terminal_a), pb = lat.terminal_parity(terminal_b);
    if (terminal_a == terminal_b) return PathParity::obstructed;
    return pa != pb ? PathParity::feasible : PathParity::obstructed;
}

/// Bond amplitudes of the form static + ramp * P(t / tau).
struct LatticeSchedule {
    Lattice2D lattice;
    std::vector<double> base;
    std::vector<double> ramp;
    Pulse pulse = Pulse::sine_squared();
    double tau = 1.0;
    int source = 0;  // node ids
    int target = 0;

    double duration() const { return tau; }

    RealMatrix hamiltonian(double t) const {
        const double p = pulse.value(std::clamp(t / tau, 0.0, 1.0));
        RealMatrix h = RealMatrix::Zero(lattice.size(), lattice.size());
        for (std::size_t k = 0; k < lattice.bonds.size(); ++k) {
            const auto& b = lattice.bonds[k];
            const double a = base[k] + ramp[k] * p;
            h(b.a, b.b) += a;
            h(b.b, b.a) += a;
        }
        return h;
    }

    ComplexVector initial_state() const { return unit(source); }
    ComplexVector target_state() const { return unit(target); }

private:
    ComplexVector unit(int k) const {
        ComplexVector v = ComplexVector::Zero(lattice.size());
        v(k) = 1.0;
        return v;
    }
};

struct PathActivation {
    std::vector<int> path;  // node ids from terminal to terminal
    double tbar = 1.0;
    double dw_min = 0.3;
    double tau = 30.0;
    double stray = 0.0;     // off-path coupling level, in units of tbar
    Pulse pulse = Pulse::sine_squared();
};

/// Couplings along the path follow the 1D transfer profile (w(t), tbar, w(t), ...),
/// starting with w(t) at the source terminal. Off-path bonds between two off-path nodes
/// keep their static intra-chain tbar dimers; other off-path bonds sit at stray * tbar,
/// and bonds touching terminals outside the path are switched off.
inline LatticeSchedule activate_path(const Lattice2D& lat, const PathActivation& act) {
    const auto& path = act.path;
    if (path.size() < 2 || path.size() % 2 != 0) throw SpecError("path must contain an even number of nodes >= 2");
    std::map<int, int> terminal_of;
    for (std::size_t k = 0; k < lat.terminals.size(); ++k) terminal_of[lat.terminals[k].node] = static_cast<int>(k);
    if (!terminal_of.count(path.front()) || !terminal_of.count(path.back()))
        throw SpecError("path endpoints must be terminals");
    const int ta = terminal_of[path.front()], tb = terminal_of[path.back()];
    if (check_path_parity(lat, ta, tb) == PathParity::obstructed)
        throw SpecError("path obstructed: terminals " + lat.terminal(ta).qubit + " (parity " +
                        std::to_string(lat.terminal_parity(ta)) + ") and " + lat.terminal(tb).qubit + " (parity " +
                        std::to_string(lat.terminal_parity(tb)) + ") carry the same sublattice parity");
    const std::set<int> on(path.begin(), path.end());
    if (on.size() != path.size()) throw SpecError("path visits a node twice");

    LatticeSchedule s;
    s.lattice = lat;
    s.base.assign(lat.bonds.size(), 0.0);
    s.ramp.assign(lat.bonds.size(), 0.0);
    s.pulse = act.pulse;
    s.tau = act.tau;
    s.source = path.front();
    s.target = path.back();
    std::vector<bool> on_path(lat.bonds.size(), false);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const int b = lat.find_bond(path[k], path[k + 1]);
        if (b < 0) throw SpecError("path step " + lat.nodes[path[k]].label + " -> " + lat.nodes[path[k + 1]].label +
                                   " is not a lattice bond");
        if (lat.nodes[path[k]].parity == lat.nodes[path[k + 1]].parity)
            throw SpecError("path step " + lat.nodes[path[k]].label + " -> " + lat.nodes[path[k + 1]].label +
                            " does not alternate parity");
        on_path[b] = true;
        if (k % 2 == 0) s.ramp[b] = act.tbar - act.dw_min;
        else s.base[b] = act.tbar;
    }
    for (std::size_t k = 0; k < lat.bonds.size(); ++k) {
        if (on_path[k]) continue;
        const auto& b = lat.bonds[k];
        const bool touches_path = on.count(b.a) || on.count(b.b);
        const bool touches_terminal = terminal_of.count(b.a) || terminal_of.count(b.b);
        if (touches_terminal) continue;
        const bool dimer = b.kind == BondKind::intra_t || b.kind == BondKind::stub_t;
        s.base[k] = (!touches_path && dimer) ? b.amplitude : act.stray * act.tbar;
    }
    return s;
}

/// Global tuning: every intra-cell bond, including the intra-cell bonds of the two chosen
/// terminals, ramps as w_max * P(t / tau); inter-cell and inter-chain bonds keep their
/// static values; intra-cell bonds of the remaining terminals stay at zero.
inline LatticeSchedule global_schedule(const Lattice2D& lat, int terminal_a, int terminal_b, double w_max, double tau,
                                       Pulse pulse = Pulse::sine_squared()) {
    if (terminal_a == terminal_b) throw SpecError("global schedule needs two distinct terminals");
    std::set<int> other;
    for (std::size_t k = 0; k < lat.terminals.size(); ++k)
        if (static_cast<int>(k) != terminal_a && static_cast<int>(k) != terminal_b) other.insert(lat.terminals[k].node);
    LatticeSchedule s;
    s.lattice = lat;
    s.base.assign(lat.bonds.size(), 0.0);
    s.ramp.assign(lat.bonds.size(), 0.0);
    s.pulse = std::move(pulse);
    s.tau = tau;
    s.source = lat.terminal(terminal_a).node;
    s.target = lat.terminal(terminal_b).node;
    for (std::size_t k = 0; k < lat.bonds.size(); ++k) {
        const auto& b = lat.bonds[k];
        const bool intra = b.kind == BondKind::intra_w || b.kind == BondKind::stub_w;
        if (!intra) {
            s.base[k] = b.amplitude;
        } else if (!other.count(b.a) && !other.count(b.b)) {
            s.ramp[k] = w_max;
        }
    }
    return s;
}

inline TransferReport evolve(const LatticeSchedule& s, int steps, EvolveOptions opt = {}) {
    opt.reference_energy = 0.0;
    return evolve(s, s.initial_state(), s.target_state(), steps, opt);
}

inline TransferReport evolve(const LatticeSchedule& s, double steps_per_unit = 40.0) {
    return evolve(s, std::max(guard_steps(s), default_steps(s, steps_per_unit)));
}

struct ObstructionScan {
    std::vector<double> w_max;
    std::vector<double> tau;
};

struct ObstructionPoint {
    double w_max = 0.0;
    double tau = 0.0;
    double O = 0.0;
    double E = 0.0;
};

struct ObstructionReport {
    std::string terminal_a, terminal_b;
    PathParity parity = PathParity::feasible;
    bool bipartite = true;
    std::vector<ObstructionPoint> points;
    double max_O = 0.0;
    double threshold = 0.01;
    int protected_zero_modes = 0;   // |#even - #odd| of the tuned component (bipartite only)
    double zero_mode_splitting = 0.0;  // largest |lambda| among the protected modes at peak tuning
    std::string scope;

    bool obstruction_holds() const { return max_O < threshold; }
};

/// Runs the global-tuning scan between two terminals and records the largest O reached.
inline ObstructionReport verify_obstruction(const Lattice2D& lat, int terminal_a, int terminal_b,
                                            const ObstructionScan& scan, unsigned workers = 1,
                                            double steps_per_unit = 40.0) {
    ObstructionReport rep;
    rep.terminal_a = lat.terminal(terminal_a).qubit;
    rep.terminal_b = lat.terminal(terminal_b).qubit;
    rep.parity = check_path_parity(lat, terminal_a, terminal_b);
    rep.bipartite = lat.bipartite();
    rep.points.resize(scan.w_max.size() * scan.tau.size());
    parallel_for(rep.points.size(), workers, [&](std::size_t i) {
        auto& pt = rep.points[i];
        pt.w_max = scan.w_max[i / scan.tau.size()];
        pt.tau = scan.tau[i % scan.tau.size()];
        const auto r = evolve(global_schedule(lat, terminal_a, terminal_b, pt.w_max, pt.tau), steps_per_unit);
        pt.O = r.O;
        pt.E = r.E;
    });
    for (const auto& p : rep.points) rep.max_O = std::max(rep.max_O, p.O);

    // Protected zero modes of the tuned component: the other terminals are decoupled.
    std::set<int> other;
    for (std::size_t k = 0; k < lat.terminals.size(); ++k)
        if (static_cast<int>(k) != terminal_a && static_cast<int>(k) != terminal_b) other.insert(lat.terminals[k].node);
    std::vector<int> keep;
    int even = 0;
    for (int k = 0; k < lat.size(); ++k)
        if (!other.count(k)) {
            keep.push_back(k);
            even += lat.nodes[k].parity == 0;
        }
    rep.protected_zero_modes = rep.bipartite ? std::abs(2 * even - static_cast<int>(keep.size())) : 0;
    if (!scan.w_max.empty() && rep.protected_zero_modes > 0) {
        const double w = *std::max_element(scan.w_max.begin(), scan.w_max.end());
        const RealMatrix h = global_schedule(lat, terminal_a, terminal_b, w, 1.0).hamiltonian(0.5);
        RealMatrix sub(keep.size(), keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i)
            for (std::size_t j = 0; j < keep.size(); ++j) sub(i, j) = h(keep[i], keep[j]);
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(sub, Eigen::EigenvaluesOnly);
        std::vector<double> mags;
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) mags.push_back(std::abs(es.eigenvalues()(k)));
        std::sort(mags.begin(), mags.end());
        rep.zero_mode_splitting = mags[static_cast<std::size_t>(rep.protected_zero_modes) - 1];
    }
    rep.scope = "global intra-cell tuning, " + std::to_string(scan.w_max.size()) + " amplitudes x " +
                std::to_string(scan.tau.size()) + " timescales; a finite scan, not a proof";
    return rep;
}

}  // namespace topnet
