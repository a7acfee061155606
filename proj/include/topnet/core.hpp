// Common types, errors and small utilities shared by every topnet module.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <atomic>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace topnet {

using Real = double;
using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;

/// Invalid model description (dimension mismatch, out-of-range parameter, bad config).
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not meet its accuracy contract.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. pulse at s > 1).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Principal value of an angle in (-pi, pi].
inline double wrap_phase(double phi) {
    double r = std::remainder(phi, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

/// Distance between two angles on the circle, in [0, pi].
inline double phase_distance(double a, double b) {
    return std::abs(wrap_phase(a - b));
}

/// Runs body(i) for i in [0, n) on up to `workers` threads. Results must be written
/// by index so the outcome does not depend on scheduling.
inline void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    const unsigned count = std::min<unsigned>(workers, static_cast<unsigned>(n));
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Golden-section maximization of a unimodal function on [lo, hi]. Stops when the
/// bracket is narrower than rel_tol * |x|.
template <class F>
double golden_section_max(F&& f, double lo, double hi, double rel_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (std::abs(b - a) > rel_tol * std::max(std::abs(c), std::abs(d))) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

}  // namespace topnet
