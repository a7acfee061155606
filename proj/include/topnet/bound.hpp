// Adiabatic loss bound C_L[P] and its scaling with chain length.
#pragma once

#include "topnet/pulse.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <optional>
#include <sstream>

namespace topnet {

struct BoundReport {
    int L = 0;
    std::string pulse_id;
    double dw_prime_min = 0.0;
    double epsilon_L = 0.0;
    double J1 = 0.0;  // integral of |I''| / (eps + I)^2
    double J2 = 0.0;  // integral of |I'|^2 / (eps + I)^3
    double C1 = 1.0;
    double C2 = 1.0;
    double C_L = 0.0;
    std::optional<double> tau;
    std::optional<double> loss_bound;
    std::optional<double> fit_exponent;

    /// (C_L / tau)^2.
    double bound_at(double t) const { return (C_L / t) * (C_L / t); }
};

inline double epsilon_L(int L, double dw_prime_min) {
    if (!(dw_prime_min > 0.0) || !(L > dw_prime_min))
        throw SpecError("adiabatic_bound requires L > dw_prime_min > 0");
    return dw_prime_min / (L - dw_prime_min);
}

namespace detail {

/// Adaptive Gauss-Kronrod over [a, b] with a 1e-8 relative target; throws with the
/// per-panel trace when a panel does not converge.
template <class F>
double integrate_panels(const F& f, const std::vector<double>& cuts, double rel_tol, const std::string& what) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double total = 0.0, total_err = 0.0;
    std::ostringstream trace;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        double err = 0.0;
        const double v = GK::integrate(f, cuts[k], cuts[k + 1], 20, rel_tol * 1e-2, &err);
        trace << "[" << cuts[k] << "," << cuts[k + 1] << "] value=" << v << " err=" << err << "; ";
        total += v;
        total_err += err;
    }
    if (!(total_err <= rel_tol * std::abs(total)) || !std::isfinite(total))
        throw NumericalError("quadrature for " + what + " did not reach relative tolerance " +
                             std::to_string(rel_tol) + ": " + trace.str());
    return total;
}

/// Panel boundaries refined geometrically toward s = 1/2 on the scale of the dip width.
inline std::vector<double> peak_cuts(double width) {
    std::vector<double> left{0.0};
    std::vector<double> offsets;
    for (double m = 1.0; m * width < 0.5; m *= 4.0) offsets.push_back(m * width);
    for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) left.push_back(0.5 - *it);
    std::vector<double> cuts = left;
    cuts.push_back(0.5);
    for (auto it = left.rbegin(); it != left.rend(); ++it) cuts.push_back(1.0 - *it);
    return cuts;
}

}  // namespace detail

/// C_L[P] = C1 * J1 + C2 * J2 with eps_L = dw'/(L - dw'). The integrands peak at s = 1/2
/// where I = 1 - P vanishes; both halves are subdivided on the dip width.
inline BoundReport adiabatic_bound(const Pulse& pulse, int L, double dw_prime_min, double C1 = 1.0, double C2 = 1.0,
                                   std::optional<double> tau = std::nullopt, double rel_tol = 1e-8) {
    BoundReport rep;
    rep.L = L;
    rep.pulse_id = pulse.id();
    rep.dw_prime_min = dw_prime_min;
    rep.C1 = C1;
    rep.C2 = C2;
    const double eps = epsilon_L(L, dw_prime_min);
    rep.epsilon_L = eps;

    auto f1 = [&](double s) {
        const double d = eps + pulse.complement(s);
        return std::abs(pulse.d2(s)) / (d * d);
    };
    auto f2 = [&](double s) {
        const double d = eps + pulse.complement(s);
        const double p1 = pulse.d1(s);
        return p1 * p1 / (d * d * d);
    };
    const auto cuts = detail::peak_cuts(pulse.peak_width(eps));
    rep.J1 = detail::integrate_panels(f1, cuts, rel_tol, "|I''|/(eps+I)^2");
    rep.J2 = detail::integrate_panels(f2, cuts, rel_tol, "|I'|^2/(eps+I)^3");
    rep.C_L = C1 * rep.J1 + C2 * rep.J2;
    if (tau) {
        if (!(*tau > 0.0)) throw SpecError("tau must be > 0");
        rep.tau = tau;
        rep.loss_bound = rep.bound_at(*tau);
    }
    return rep;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw SpecError("loglog_slope needs >= 2 matching points");
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += std::log(x[k]);
        my += std::log(y[k]);
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double dx = std::log(x[k]) - mx;
        sxy += dx * (std::log(y[k]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

/// Bounds for every L and the fitted exponent of C_L ~ L^k (stored on each report).
inline std::vector<BoundReport> bound_scaling(const Pulse& pulse, const std::vector<int>& Ls, double dw_prime_min,
                                              double C1 = 1.0, double C2 = 1.0) {
    std::vector<BoundReport> out;
    std::vector<double> x, y;
    for (int L : Ls) {
        out.push_back(adiabatic_bound(pulse, L, dw_prime_min, C1, C2));
        x.push_back(L);
        y.push_back(out.back().C_L);
    }
    if (out.size() >= 2) {
        const double k = loglog_slope(x, y);
        for (auto& r : out) r.fit_exponent = k;
    }
    return out;
}

struct BoundSample {
    int L = 0;
    double tau = 0.0;
    double loss = 0.0;  // simulated 1 - E
};

/// Smallest common C1 = C2 = c for which (C_L/tau)^2 >= loss holds on every sample.
inline double calibrate_constants(const Pulse& pulse, double dw_prime_min, const std::vector<BoundSample>& samples) {
    double c = 0.0;
    for (const auto& s : samples) {
        const auto unit = adiabatic_bound(pulse, s.L, dw_prime_min, 1.0, 1.0);
        c = std::max(c, s.tau * std::sqrt(std::max(s.loss, 0.0)) / unit.C_L);
    }
    return c;
}

}  // namespace topnet
