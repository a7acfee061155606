// Dimensionless pulse envelopes P : [0,1] -> [0,1] with P(0) = P(1) = 0,
// P'(0) = P'(1) = 0 and P(1/2) = 1.
#pragma once

#include "topnet/core.hpp"

// Boost 1.74 pchip calls isnan unqualified; <math.h> brings it into the global namespace.
#include <math.h>
#include <boost/math/interpolators/pchip.hpp>

#include <memory>
#include <string>
#include <vector>

namespace topnet {

enum class PulseFamily { sine_squared, smoothed, tabulated };

class Pulse {
public:
    static Pulse sine_squared() { return Pulse(PulseFamily::sine_squared, 2); }

    /// P_n(s) = 1 - cos^n(pi s) for even n >= 2; the complement has an order-n zero at s = 1/2.
    static Pulse smoothed(int n) {
        if (n < 2 || n % 2 != 0) throw SpecError("smoothed pulse order must be an even integer >= 2");
        return Pulse(PulseFamily::smoothed, n);
    }

    /// Monotone-cubic (PCHIP) interpolation through (s, P) samples spanning [0, 1].
    static Pulse tabulated(std::vector<double> s, std::vector<double> p) {
        if (s.size() != p.size() || s.size() < 4) throw SpecError("tabulated pulse needs >= 4 matching samples");
        if (s.front() != 0.0 || s.back() != 1.0) throw SpecError("tabulated pulse samples must span [0, 1]");
        for (std::size_t k = 1; k < s.size(); ++k)
            if (!(s[k] > s[k - 1])) throw SpecError("tabulated pulse abscissae must be strictly increasing");
        for (double v : p)
            if (v < 0.0 || v > 1.0) throw SpecError("tabulated pulse values must lie in [0, 1]");
        Pulse pulse(PulseFamily::tabulated, 0);
        pulse.s_ = s;
        pulse.p_ = p;
        pulse.interp_ = std::make_shared<const Interp>(std::move(s), std::move(p), 0.0, 0.0);
        return pulse;
    }

    PulseFamily family() const { return family_; }
    int order() const { return n_; }
    const std::vector<double>& samples_s() const { return s_; }
    const std::vector<double>& samples_p() const { return p_; }

    std::string id() const {
        switch (family_) {
            case PulseFamily::sine_squared: return "sine_squared";
            case PulseFamily::smoothed: return "smoothed_order_" + std::to_string(n_);
            case PulseFamily::tabulated: return "tabulated";
        }
        return "?";
    }

    /// Width of the dip of I = 1 - P around s = 1/2 for a given offset eps.
    double peak_width(double eps) const {
        const int n = family_ == PulseFamily::smoothed ? n_ : 2;
        return std::pow(eps, 1.0 / n);
    }

    double value(double s) const {
        check(s);
        switch (family_) {
            case PulseFamily::sine_squared: {
                const double x = std::sin(kPi * s);
                return x * x;
            }
            case PulseFamily::smoothed: return 1.0 - std::pow(std::cos(kPi * s), n_);
            case PulseFamily::tabulated: return (*interp_)(s);
        }
        return 0.0;
    }

    /// I(s) = 1 - P(s), computed directly for the analytic families.
    double complement(double s) const {
        check(s);
        switch (family_) {
            case PulseFamily::sine_squared: {
                const double c = std::cos(kPi * s);
                return c * c;
            }
            case PulseFamily::smoothed: return std::pow(std::cos(kPi * s), n_);
            case PulseFamily::tabulated: return 1.0 - (*interp_)(s);
        }
        return 0.0;
    }

    /// P'(s).
    double d1(double s) const {
        check(s);
        switch (family_) {
            case PulseFamily::sine_squared: return kPi * std::sin(2.0 * kPi * s);
            case PulseFamily::smoothed: {
                const double c = std::cos(kPi * s), sn = std::sin(kPi * s);
                return n_ * kPi * std::pow(c, n_ - 1) * sn;
            }
            case PulseFamily::tabulated: return fd1(s);
        }
        return 0.0;
    }

    /// P''(s).
    double d2(double s) const {
        check(s);
        switch (family_) {
            case PulseFamily::sine_squared: return 2.0 * kPi * kPi * std::cos(2.0 * kPi * s);
            case PulseFamily::smoothed: {
                const double c = std::cos(kPi * s), sn = std::sin(kPi * s);
                const double cn2 = n_ >= 2 ? std::pow(c, n_ - 2) : 0.0;
                return -n_ * kPi * kPi * ((n_ - 1) * cn2 * sn * sn - std::pow(c, n_));
            }
            case PulseFamily::tabulated: return fd2(s);
        }
        return 0.0;
    }

private:
    using Interp = boost::math::interpolators::pchip<std::vector<double>>;
    static constexpr double kFdStep = 1e-5;

    Pulse(PulseFamily f, int n) : family_(f), n_(n) {}

    static void check(double s) {
        if (!(s >= 0.0 && s <= 1.0)) throw DomainError("pulse evaluated outside [0, 1]: s = " + std::to_string(s));
    }

    double raw(double s) const { return (*interp_)(std::clamp(s, 0.0, 1.0)); }

    double fd1(double s) const {
        const double h = kFdStep;
        if (s < h) return (raw(s + h) - raw(s)) / h;
        if (s > 1.0 - h) return (raw(s) - raw(s - h)) / h;
        return (raw(s + h) - raw(s - h)) / (2.0 * h);
    }

    double fd2(double s) const {
        const double h = kFdStep;
        const double c = std::clamp(s, h, 1.0 - h);
        return (raw(c + h) - 2.0 * raw(c) + raw(c - h)) / (h * h);
    }

    PulseFamily family_;
    int n_;
    std::vector<double> s_, p_;
    std::shared_ptr<const Interp> interp_;
};

inline double eval_pulse(const Pulse& pulse, double s) { return pulse.value(s); }

/// Largest violation of the four endpoint/midpoint conditions.
inline double pulse_contract_defect(const Pulse& pulse) {
    return std::max({std::abs(pulse.value(0.0)), std::abs(pulse.value(1.0)), std::abs(pulse.d1(0.0)),
                     std::abs(pulse.d1(1.0)), std::abs(pulse.value(0.5) - 1.0)});
}

}  // namespace topnet
