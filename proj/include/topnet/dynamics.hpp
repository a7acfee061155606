// Time-dependent single-excitation evolution and transfer figures of merit.
#pragma once

#include "topnet/schedule.hpp"

#include <concepts>
#include <optional>

namespace topnet {

/// Anything that provides H(t) on [0, duration()].
template <class S>
concept TimeDependentHamiltonian = requires(const S& s, double t) {
    { s.hamiltonian(t) } -> std::convertible_to<RealMatrix>;
    { s.duration() } -> std::convertible_to<double>;
};

struct WaveState {
    ComplexVector amplitudes;
    std::vector<std::string> basis_labels;

    double norm() const { return amplitudes.norm(); }
};

struct TimeSample {
    double t = 0.0;
    RealVector populations;  // |psi_k|^2
};

struct TransferReport {
    double O = 0.0;
    double phi = 0.0;
    double E = 0.0;
    double norm_drift = 0.0;
    int steps = 0;
    std::vector<TimeSample> timeseries;
    WaveState final_state;

    double loss() const { return 1.0 - E; }
};

struct EvolveOptions {
    int record_every = 0;          // 0 disables the time series
    bool frame_correction = true;  // remove the uniform reference-energy phase from phi
    double reference_energy = 0.0;
    bool enforce_step_guard = true;
};

/// Upper bound on the spectral width: infinity norm of H minus its mean diagonal.
inline double width_bound(const RealMatrix& h) {
    const double shift = h.diagonal().mean();
    RealMatrix c = h;
    c.diagonal().array() -= shift;
    return c.cwiseAbs().rowwise().sum().maxCoeff();
}

template <TimeDependentHamiltonian S>
double max_width_bound(const S& schedule, int samples = 65) {
    double worst = 0.0;
    for (int k = 0; k < samples; ++k)
        worst = std::max(worst, width_bound(schedule.hamiltonian(schedule.duration() * k / (samples - 1))));
    return worst;
}

/// Default step count: 200 steps per unit of tau * max ||H||, at least 100.
template <TimeDependentHamiltonian S>
int default_steps(const S& schedule, double per_unit = 200.0) {
    const double work = schedule.duration() * max_width_bound(schedule);
    return std::max(100, static_cast<int>(std::ceil(per_unit * work)));
}

/// Minimum admissible step count, 10 * tau * max ||H||.
template <TimeDependentHamiltonian S>
int guard_steps(const S& schedule) {
    return static_cast<int>(std::ceil(10.0 * schedule.duration() * max_width_bound(schedule)));
}

/// Propagates psi through [t0, t1] with the midpoint exponential: on each step H is
/// frozen at the step midpoint and exponentiated exactly through its eigenbasis.
/// State may be a vector or a matrix of column states (a propagator).
template <TimeDependentHamiltonian S, class State>
State propagate(const S& schedule, State psi, double t0, double t1, int steps,
                const std::function<void(int, double, const State&)>& observer = {}) {
    const double dt = (t1 - t0) / steps;
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver;
    if (observer) observer(0, t0, psi);
    for (int n = 0; n < steps; ++n) {
        solver.compute(schedule.hamiltonian(t0 + (n + 0.5) * dt));
        const RealMatrix& v = solver.eigenvectors();
        State coeff = v.transpose() * psi;
        for (Eigen::Index k = 0; k < coeff.rows(); ++k)
            coeff.row(k) *= std::polar(1.0, -solver.eigenvalues()(k) * dt);
        psi = v * coeff;
        if (observer) observer(n + 1, t0 + (n + 1) * dt, psi);
    }
    return psi;
}

/// Evolves `initial` over the full schedule and measures the overlap with `target`:
/// O = |<target|psi>|^2, phi = arg <target|psi>, E = O + |<initial|psi>|^2.
template <TimeDependentHamiltonian S>
TransferReport evolve(const S& schedule, const ComplexVector& initial, const ComplexVector& target, int steps,
                      const EvolveOptions& opt = {}) {
    if (steps < 1) throw SpecError("evolve: steps must be positive");
    if (opt.enforce_step_guard) {
        const int guard = guard_steps(schedule);
        if (steps < guard)
            throw SpecError("evolve: " + std::to_string(steps) + " steps below the resolution guard " +
                            std::to_string(guard) + " (10 * tau * max||H||)");
    }
    TransferReport rep;
    rep.steps = steps;
    std::function<void(int, double, const ComplexVector&)> observer;
    if (opt.record_every > 0) {
        observer = [&](int n, double t, const ComplexVector& psi) {
            if (n % opt.record_every == 0 || n == steps) rep.timeseries.push_back({t, psi.cwiseAbs2()});
        };
    }
    const double tau = schedule.duration();
    ComplexVector psi = propagate<S, ComplexVector>(schedule, initial, 0.0, tau, steps, observer);

    rep.norm_drift = std::abs(psi.norm() - initial.norm());
    if (rep.norm_drift > 1e-6)
        throw NumericalError("evolve: norm drift " + std::to_string(rep.norm_drift) + " exceeds 1e-6; increase steps");

    const Complex amp = target.dot(psi);  // conjugates target
    const Complex back = initial.dot(psi);
    rep.O = std::norm(amp);
    rep.E = rep.O + std::norm(back);
    double phi = std::arg(amp);
    if (opt.frame_correction) phi += opt.reference_energy * tau;
    rep.phi = wrap_phase(phi);
    rep.final_state.amplitudes = std::move(psi);
    return rep;
}

/// Transfer from the left to the right sweet-spot edge mode of a protocol schedule.
inline TransferReport evolve(const ProtocolSchedule& schedule, int steps, EvolveOptions opt = {}) {
    schedule.validate();
    opt.reference_energy = schedule.reference_energy();
    auto rep = evolve(schedule, schedule.initial_state(), schedule.target_state(), steps, opt);
    rep.final_state.basis_labels = build(schedule.base).basis_labels;
    return rep;
}

inline TransferReport evolve(const ProtocolSchedule& schedule) { return evolve(schedule, default_steps(schedule)); }

enum class PhaseClass { plus_half_pi, minus_half_pi, unquantized };

inline std::string to_string(PhaseClass c) {
    switch (c) {
        case PhaseClass::plus_half_pi: return "plus_half_pi";
        case PhaseClass::minus_half_pi: return "minus_half_pi";
        case PhaseClass::unquantized: return "unquantized";
    }
    return "?";
}

/// Classifies phi against +-pi/2 with a 1e-2 rad tolerance.
inline PhaseClass phase_check(const TransferReport& report, int /*L*/, double tol = 1e-2) {
    if (phase_distance(report.phi, kPi / 2) <= tol) return PhaseClass::plus_half_pi;
    if (phase_distance(report.phi, -kPi / 2) <= tol) return PhaseClass::minus_half_pi;
    return PhaseClass::unquantized;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepCell {
    double tau = 0.0;
    double param = 0.0;
    std::optional<TransferReport> report;
    std::string error;
};

struct SweepGrid {
    std::vector<double> taus;
    std::vector<double> params;
};

using ScheduleFactory = std::function<ProtocolSchedule(double tau, double param)>;

/// One evolve per (tau, param) point, tau-major order. Integration or validation
/// failures are recorded in the cell instead of aborting the sweep.
inline std::vector<SweepCell> sweep(const SweepGrid& grid, const ScheduleFactory& factory, double steps_per_unit = 40.0,
                                    unsigned workers = 1) {
    std::vector<SweepCell> cells(grid.taus.size() * grid.params.size());
    parallel_for(cells.size(), workers, [&](std::size_t i) {
        SweepCell& cell = cells[i];
        cell.tau = grid.taus[i / grid.params.size()];
        cell.param = grid.params[i % grid.params.size()];
        try {
            const auto schedule = factory(cell.tau, cell.param);
            const int steps = std::max(guard_steps(schedule), default_steps(schedule, steps_per_unit));
            auto rep = evolve(schedule, steps);
            rep.final_state = {};
            cell.report = std::move(rep);
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    });
    return cells;
}

// ---------------------------------------------------------------------------
// Transfer tuning
// ---------------------------------------------------------------------------

struct OptimalTransfer {
    double dw_min = 0.0;
    TransferReport report;
};

/// Locates the outermost high-fidelity branch of a bSSH transfer at fixed tau: scans
/// dw_min downward from dw_hi, takes the first local maximum of O above `threshold`
/// and refines it by golden section.
inline OptimalTransfer optimize_outermost(int L, double tbar, double tau, double dw_lo, double dw_hi, double dw_step,
                                          double threshold = 0.9, double steps_per_unit = 40.0,
                                          Pulse pulse = Pulse::sine_squared()) {
    auto run = [&](double dw) {
        const auto s = ssh_transfer(L, tbar, dw, tau, pulse);
        return evolve(s, std::max(guard_steps(s), default_steps(s, steps_per_unit)));
    };
    std::vector<double> grid;
    for (double d = dw_hi; d >= dw_lo - 1e-12; d -= dw_step) grid.push_back(d);
    std::vector<double> O(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) O[k] = run(grid[k]).O;
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
        if (O[k] >= O[k - 1] && O[k] >= O[k + 1] && O[k] > threshold) {
            const double best =
                golden_section_max([&](double d) { return run(d).O; }, grid[k + 1], grid[k - 1], 1e-6);
            return {best, run(best)};
        }
    }
    throw NumericalError("optimize_outermost: no branch with O > " + std::to_string(threshold) + " in the scan");
}

/// Maximizes O over tau in [lo, hi] by golden section (relative tolerance rel_tol).
template <class Factory>
std::pair<double, TransferReport> retune_tau(const Factory& factory, double lo, double hi, double rel_tol,
                                             double steps_per_unit = 40.0) {
    auto run = [&](double tau) {
        const auto s = factory(tau);
        return evolve(s, std::max(guard_steps(s), default_steps(s, steps_per_unit)));
    };
    const double best = golden_section_max([&](double tau) { return run(tau).O; }, lo, hi, rel_tol);
    return {best, run(best)};
}

}  // namespace topnet
