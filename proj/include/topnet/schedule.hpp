// Protocol schedules: the map from time t in [0, tau] to network parameters.
#pragma once

#include "topnet/disorder.hpp"
#include "topnet/network.hpp"
#include "topnet/pulse.hpp"

#include <optional>

namespace topnet {

enum class Envelope { onsite_w, barrier_omega, uniform_t, offset_domega };

inline std::string to_string(Envelope e) {
    switch (e) {
        case Envelope::onsite_w: return "onsite_w";
        case Envelope::barrier_omega: return "barrier_omega";
        case Envelope::uniform_t: return "uniform_t";
        case Envelope::offset_domega: return "offset_domega";
    }
    return "?";
}

struct ProtocolSchedule {
    NetworkSpec base;
    Pulse pulse = Pulse::sine_squared();
    double tau = 1.0;
    Envelope target = Envelope::onsite_w;
    double amplitude = 0.0;      // w_max, t_max or domega_max
    double floor = 0.0;          // residual coupling w_min (onsite_w only)
    double omega_min = 0.0;      // barrier_omega only
    double omega_max = 0.0;      // barrier_omega only
    std::optional<DisorderRealization> disorder;

    double duration() const { return tau; }
    int dim() const { return base.dim(); }

    void validate() const {
        base.validate();
        if (!(tau > 0.0)) throw SpecError("protocol timescale tau must be > 0");
        switch (target) {
            case Envelope::onsite_w: {
                if (base.kind != ModelKind::bSSH) throw SpecError("onsite_w envelope drives bSSH networks");
                const double tmin = base.t.empty() ? std::numeric_limits<double>::infinity()
                                                   : *std::min_element(base.t.begin(), base.t.end());
                if (amplitude < 0.0 || floor < 0.0) throw SpecError("w_max and w_min must be >= 0");
                if (!(amplitude < tmin)) throw SpecError("bSSH schedule must keep w(t) < tbar (topological phase)");
                break;
            }
            case Envelope::barrier_omega:
                if (base.kind != ModelKind::bBarrier) throw SpecError("barrier_omega envelope drives bBarrier networks");
                break;
            case Envelope::uniform_t:
                if (base.kind != ModelKind::bProp) throw SpecError("uniform_t envelope drives bProp networks");
                break;
            case Envelope::offset_domega:
                if (base.kind != ModelKind::bMC) throw SpecError("offset_domega envelope drives bMC networks");
                break;
        }
    }

    double envelope(double time) const { return pulse.value(std::clamp(time / tau, 0.0, 1.0)); }

    /// Network parameters at time t.
    NetworkSpec spec_at(double time) const {
        const double p = envelope(time);
        NetworkSpec s = base;
        switch (target) {
            case Envelope::onsite_w: std::fill(s.w.begin(), s.w.end(), floor + (amplitude - floor) * p); break;
            case Envelope::barrier_omega: s.omega_barrier = omega_max + (omega_min - omega_max) * p; break;
            case Envelope::uniform_t:
                std::fill(s.w.begin(), s.w.end(), amplitude * p);
                std::fill(s.t.begin(), s.t.end(), amplitude * p);
                break;
            case Envelope::offset_domega: std::fill(s.w.begin(), s.w.end(), 0.5 * amplitude * p); break;
        }
        return s;
    }

    RealMatrix hamiltonian(double time) const {
        RealMatrix h = build(spec_at(time)).entries;
        if (disorder) h = disorder->apply(h);
        return h;
    }

    double reference_energy() const {
        return base.kind == ModelKind::bBarrier ? base.omega_edge : base.delta;
    }

    ComplexVector initial_state() const { return edge_state(base.kind, base.L, Edge::left); }
    ComplexVector target_state() const { return edge_state(base.kind, base.L, Edge::right); }
};

/// bSSH transfer with wbar(t) = (tbar - dw_min) P(t/tau).
inline ProtocolSchedule ssh_transfer(int L, double tbar, double dw_min, double tau, Pulse pulse = Pulse::sine_squared()) {
    ProtocolSchedule s;
    s.base = NetworkSpec::ssh(L, 0.0, tbar);
    s.pulse = std::move(pulse);
    s.tau = tau;
    s.target = Envelope::onsite_w;
    s.amplitude = tbar - dw_min;
    s.validate();
    return s;
}

/// Barrier transfer with omega_barrier(t) = omega_max + (omega_min - omega_max) P(t/tau).
inline ProtocolSchedule barrier_transfer(int L, double tbar, double omega_edge, double omega_min, double omega_max,
                                         double tau) {
    ProtocolSchedule s;
    s.base = NetworkSpec::barrier(L, tbar, omega_edge, omega_max);
    s.tau = tau;
    s.target = Envelope::barrier_omega;
    s.omega_min = omega_min;
    s.omega_max = omega_max;
    s.validate();
    return s;
}

/// Free propagation with every coupling at t_max P(t/tau).
inline ProtocolSchedule prop_transfer(int L, double t_max, double tau, double omega_bar = 0.0) {
    ProtocolSchedule s;
    s.base = NetworkSpec::propagation(L, 0.0, omega_bar);
    s.tau = tau;
    s.target = Envelope::uniform_t;
    s.amplitude = t_max;
    s.validate();
    return s;
}

/// bMC transfer with domega(t) = domega_max P(t/tau).
inline ProtocolSchedule mc_transfer(int L, double tbar, double domega_max, double tau) {
    ProtocolSchedule s;
    s.base = NetworkSpec::majorana(L, 0.0, tbar);
    s.tau = tau;
    s.target = Envelope::offset_domega;
    s.amplitude = domega_max;
    s.validate();
    return s;
}

}  // namespace topnet
