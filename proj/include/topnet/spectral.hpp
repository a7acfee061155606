// Exact diagonalization, edge/bulk gap extraction and the L -> infinity rescaled
// spectrum of the bSSH chain near criticality.
#pragma once

#include "topnet/network.hpp"

#include <array>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

namespace topnet {

struct SpectralReport {
    RealVector eigenvalues;   // ascending
    RealMatrix eigenvectors;  // column k belongs to eigenvalues(k)
    double reference_energy = 0.0;
    double dE_edge = 0.0;
    double dE_bulk = 0.0;
    double R = std::numeric_limits<double>::infinity();
    std::array<int, 2> edge_index{-1, -1};  // lower, upper
    std::array<RealVector, 2> edge_vectors; // left-localized first when degenerate
    std::array<double, 2> edge_localization{0.0, 0.0};
    bool flagged = false;
    std::string flag_reason;

    bool is_edge(int k) const { return k == edge_index[0] || k == edge_index[1]; }
};

namespace detail {

// Weight of v on the outer two unit cells (four modes at each end).
inline double outer_weight(const RealVector& v) {
    const auto n = v.size();
    const Eigen::Index band = std::min<Eigen::Index>(4, n / 2);
    double w = 0.0;
    for (Eigen::Index k = 0; k < band; ++k) w += v(k) * v(k) + v(n - 1 - k) * v(n - 1 - k);
    return w;
}

}  // namespace detail

/// Ascending eigen-decomposition with edge-pair identification around the matrix's
/// reference energy. Edge candidates are ranked by distance to the reference energy;
/// ties (within 1e-12) are broken by weight on the outer two unit cells. An unresolved
/// tie or a chain without bulk levels flags the report.
inline SpectralReport diagonalize(const CouplingMatrix& matrix) {
    if (symmetry_defect(matrix.entries) > 1e-12) throw SpecError("diagonalize: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(matrix.entries);
    if (solver.info() != Eigen::Success) throw NumericalError("diagonalize: eigensolver failed");

    SpectralReport rep;
    rep.eigenvalues = solver.eigenvalues();
    rep.eigenvectors = solver.eigenvectors();
    rep.reference_energy = matrix.reference_energy;
    const auto n = rep.eigenvalues.size();
    const double ref = matrix.reference_energy;
    constexpr double tie = 1e-12;

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> loc(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) loc[static_cast<std::size_t>(k)] = detail::outer_weight(rep.eigenvectors.col(k));
    auto dist = [&](int k) { return std::abs(rep.eigenvalues(k) - ref); };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (std::abs(dist(a) - dist(b)) > tie) return dist(a) < dist(b);
        return loc[static_cast<std::size_t>(a)] > loc[static_cast<std::size_t>(b)];
    });

    if (n < 2) {
        rep.flagged = true;
        rep.flag_reason = "fewer than two levels";
        return rep;
    }
    int e0 = std::min(order[0], order[1]);
    int e1 = std::max(order[0], order[1]);
    rep.edge_index = {e0, e1};
    rep.dE_edge = std::abs(rep.eigenvalues(e1) - rep.eigenvalues(e0));

    if (n > 2) {
        const int third = order[2];
        if (std::abs(dist(order[1]) - dist(third)) < tie &&
            std::abs(loc[static_cast<std::size_t>(order[1])] - loc[static_cast<std::size_t>(third)]) < tie) {
            rep.flagged = true;
            rep.flag_reason = "edge/bulk identification gap below 1e-12";
        }
        double gap = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < n; ++k) {
            if (rep.is_edge(static_cast<int>(k))) continue;
            gap = std::min({gap, std::abs(rep.eigenvalues(k) - rep.eigenvalues(e0)),
                            std::abs(rep.eigenvalues(k) - rep.eigenvalues(e1))});
        }
        rep.dE_bulk = gap;
    } else {
        rep.flagged = true;
        rep.flag_reason = "no bulk levels";
    }
    rep.R = rep.dE_edge > 0.0 ? rep.dE_bulk / rep.dE_edge : std::numeric_limits<double>::infinity();

    RealVector v0 = rep.eigenvectors.col(e0), v1 = rep.eigenvectors.col(e1);
    if (rep.dE_edge < tie) {
        // Degenerate pair: rotate to the maximally left/right localized combinations by
        // diagonalizing the mode-position operator inside the pair's span.
        RealVector x = RealVector::LinSpaced(n, 0.0, static_cast<double>(n - 1));
        Eigen::Matrix2d pos;
        pos(0, 0) = v0.dot(x.cwiseProduct(v0));
        pos(1, 1) = v1.dot(x.cwiseProduct(v1));
        pos(0, 1) = pos(1, 0) = v0.dot(x.cwiseProduct(v1));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> s2(pos);
        RealVector left = s2.eigenvectors()(0, 0) * v0 + s2.eigenvectors()(1, 0) * v1;
        RealVector right = s2.eigenvectors()(0, 1) * v0 + s2.eigenvectors()(1, 1) * v1;
        v0 = left;
        v1 = right;
    }
    rep.edge_vectors = {v0, v1};
    rep.edge_localization = {detail::outer_weight(v0), detail::outer_weight(v1)};
    return rep;
}

/// max |V^T V - 1| of the eigenvector matrix.
inline double orthonormality_defect(const SpectralReport& rep) {
    const auto n = rep.eigenvectors.cols();
    return (rep.eigenvectors.transpose() * rep.eigenvectors - RealMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

/// max over k of |lambda_k - (2 delta - lambda_{n-1-k})|.
inline double spectrum_asymmetry(const RealVector& ascending, double delta) {
    const auto n = ascending.size();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
        worst = std::max(worst, std::abs(ascending(k) - (2.0 * delta - ascending(n - 1 - k))));
    return worst;
}

// ---------------------------------------------------------------------------
// Rescaled spectrum near the critical point
// ---------------------------------------------------------------------------

struct RescaledSolution {
    double dw_prime = 0.0;
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    double residual0 = 0.0;
    double residual1 = 0.0;

    double edge_energy() const { return 2.0 * lambda0; }             // L * dE_edge
    double bulk_energy() const { return std::abs(lambda1 - lambda0); } // L * dE_bulk
    double ratio() const { return bulk_energy() / edge_energy(); }
};

class RootNotFound : public NumericalError {
public:
    using NumericalError::NumericalError;
};

namespace detail {

// Below the continuum (lambda < a): (a - s)/(a + s) - exp(-2s), s = sqrt(a^2 - lambda^2).
// (a - s) is evaluated as lambda^2/(a + s) to avoid cancellation for tiny lambda.
inline double rescaled_residual_below(double a, double lambda) {
    const double s = std::sqrt(std::max(a * a - lambda * lambda, 0.0));
    const double q = lambda * lambda / ((a + s) * (a + s));
    return q - std::exp(-2.0 * s);
}

// Continuation lambda > a with s -> i*kappa: both sides have unit modulus and the
// residual is |exp(-2i atan(kappa/a)) - exp(-2i kappa)| = 2|sin(kappa - atan(kappa/a))|.
// The signed sine is what gets bracketed.
inline double rescaled_phase_above(double a, double kappa) {
    return std::sin(kappa - std::atan(kappa / a));
}

template <class F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-15 * std::abs(hi) && hi - lo < 1e-12) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Lowest two positive roots of the rescaled transcendental equation at
/// dw_prime = L (tbar - wbar). Roots are bracketed on a 10^4-point grid over
/// lambda in [0, dw_prime) and over kappa = sqrt(lambda^2 - dw_prime^2) in (0, 2 pi],
/// then refined by bisection. The trivial solution lambda = dw_prime is excluded.
inline RescaledSolution solve_rescaled(double dw_prime) {
    if (!(dw_prime > 0.0) || !std::isfinite(dw_prime)) throw SpecError("solve_rescaled: dw_prime must be > 0");
    const double a = dw_prime;
    constexpr int grid = 10000;
    struct Root {
        double lambda;
        double residual;
    };
    std::vector<Root> roots;

    auto below = [a](double l) { return detail::rescaled_residual_below(a, l); };
    double prev_x = 0.0, prev_f = below(0.0);
    for (int k = 1; k < grid; ++k) {
        const double x = a * static_cast<double>(k) / grid;
        const double fx = below(x);
        if ((prev_f < 0.0) != (fx < 0.0)) {
            const double r = detail::bisect(below, prev_x, x);
            roots.push_back({r, std::abs(below(r))});
        }
        prev_x = x;
        prev_f = fx;
    }

    auto above = [a](double kappa) { return detail::rescaled_phase_above(a, kappa); };
    const double kmax = 2.0 * kPi;
    prev_x = kmax * 1e-6;
    prev_f = above(prev_x);
    for (int k = 1; k <= grid; ++k) {
        const double x = kmax * static_cast<double>(k) / grid;
        if (x <= prev_x) continue;
        const double fx = above(x);
        if ((prev_f < 0.0) != (fx < 0.0)) {
            const double kappa = detail::bisect(above, prev_x, x);
            roots.push_back({std::sqrt(a * a + kappa * kappa), 2.0 * std::abs(above(kappa))});
        }
        prev_x = x;
        prev_f = fx;
    }

    std::sort(roots.begin(), roots.end(), [](const Root& l, const Root& r) { return l.lambda < r.lambda; });
    if (roots.size() < 2) {
        std::ostringstream msg;
        msg << "solve_rescaled: found " << roots.size() << " root(s) for dw_prime=" << a
            << "; scanned lambda in [0," << a << ") and kappa in (0," << kmax << "] on " << grid << " points";
        throw RootNotFound(msg.str());
    }
    RescaledSolution sol{a, roots[0].lambda, roots[1].lambda, roots[0].residual, roots[1].residual};
    if (sol.residual0 > 1e-10 || sol.residual1 > 1e-10)
        throw NumericalError("solve_rescaled: residual above 1e-10 after refinement");
    return sol;
}

/// dw_prime at which the rescaled bulk/edge ratio equals r_target, by bisection on
/// the monotone ratio over dw_prime in [1.05, 40].
inline double plan_ratio(double r_target) {
    if (!(r_target > 1.0)) throw SpecError("plan_ratio: R_target must exceed 1");
    double lo = 1.05, hi = 40.0;
    const double r_lo = solve_rescaled(lo).ratio();
    const double r_hi = solve_rescaled(hi).ratio();
    if (r_target < r_lo || r_target > r_hi) {
        std::ostringstream msg;
        msg << "plan_ratio: R_target=" << r_target << " outside achievable range [" << r_lo << ", " << r_hi
            << "] for dw_prime in [" << lo << ", " << hi << "]";
        throw SpecError(msg.str());
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        (solve_rescaled(mid).ratio() < r_target ? lo : hi) = mid;
    }
    const double a = 0.5 * (lo + hi);
    if (std::abs(solve_rescaled(a).ratio() - r_target) > 1e-6)
        throw NumericalError("plan_ratio: ratio residual above 1e-6");
    return a;
}

/// Maps between a finite bSSH chain (L, tbar, wbar) and rescaled variables.
/// `naive`: dw' = L (t - w), lambda' = L lambda.
/// `symmetric`: effective length L + 1/2 and energy unit sqrt(t w), which removes the
/// leading 1/L finite-size correction. Both agree as L -> infinity.
enum class FiniteSizeMap { naive, symmetric };

/// wbar that realizes rescaled distance dw_prime on a chain of L cells.
inline double wbar_for_rescaled(int L, double tbar, double dw_prime, FiniteSizeMap map) {
    if (map == FiniteSizeMap::naive) return tbar - dw_prime / L;
    // Solve (L+1/2)(t - w)/sqrt(t w) = a for w in (0, t): quadratic in u = sqrt(w/t).
    const double c = dw_prime / (L + 0.5);
    const double u = (-c + std::sqrt(c * c + 4.0)) / 2.0;
    return tbar * u * u;
}

/// Rescaled energy lambda' of a finite-chain eigenvalue lambda.
inline double rescale_energy(int L, double tbar, double wbar, double lambda, FiniteSizeMap map) {
    if (map == FiniteSizeMap::naive) return L * lambda;
    return (L + 0.5) * lambda / std::sqrt(tbar * wbar);
}

/// The two lowest positive eigenvalues of a finite bSSH chain (delta = 0), rescaled.
inline std::pair<double, double> finite_rescaled_levels(int L, double tbar, double dw_prime, FiniteSizeMap map) {
    const double w = wbar_for_rescaled(L, tbar, dw_prime, map);
    const auto rep = diagonalize(build_bssh(NetworkSpec::ssh(L, w, tbar)));
    std::vector<double> pos;
    for (Eigen::Index k = 0; k < rep.eigenvalues.size(); ++k)
        if (rep.eigenvalues(k) > 0.0) pos.push_back(rep.eigenvalues(k));
    std::sort(pos.begin(), pos.end());
    if (pos.size() < 2) throw SpecError("finite_rescaled_levels: chain too short");
    return {rescale_energy(L, tbar, w, pos[0], map), rescale_energy(L, tbar, w, pos[1], map)};
}

}  // namespace topnet
