// Loss scaling studies: tau = tau0 * L^(1 + alpha) at fixed rescaled distance dw'.
#pragma once

#include "topnet/bound.hpp"
#include "topnet/dynamics.hpp"

namespace topnet {

struct ScalingRow {
    int L = 0;
    double tau = 0.0;
    double C_L = 0.0;
    double bound = 0.0;                    // C_L / tau, the square root of the loss bound
    std::optional<double> simulated_loss;  // 1 - E
    std::string error;
};

struct ScalingOptions {
    double dw_prime_min = 3.3;
    double tbar = 1.0;
    double C1 = 1.0;
    double C2 = 1.0;
    bool simulate = true;
    double steps_per_unit = 200.0;
    unsigned workers = 1;
};

/// One row per L. The transfer uses dw_min = dw'/L with no per-L retuning.
inline std::vector<ScalingRow> scaling_study(double alpha, double tau0, const std::vector<int>& Ls, const Pulse& pulse,
                                             const ScalingOptions& opt = {}) {
    if (!std::is_sorted(Ls.begin(), Ls.end())) throw SpecError("scaling_study: L list must be sorted ascending");
    if (!(tau0 > 0.0)) throw SpecError("scaling_study: tau0 must be > 0");
    std::vector<ScalingRow> rows(Ls.size());
    parallel_for(Ls.size(), opt.workers, [&](std::size_t k) {
        ScalingRow& row = rows[k];
        row.L = Ls[k];
        row.tau = tau0 * std::pow(static_cast<double>(row.L), 1.0 + alpha);
        const auto b = adiabatic_bound(pulse, row.L, opt.dw_prime_min, opt.C1, opt.C2, row.tau);
        row.C_L = b.C_L;
        row.bound = b.C_L / row.tau;
        if (!opt.simulate) return;
        try {
            const auto s = ssh_transfer(row.L, opt.tbar, opt.dw_prime_min * opt.tbar / row.L, row.tau, pulse);
            row.simulated_loss = evolve(s, std::max(guard_steps(s), default_steps(s, opt.steps_per_unit))).loss();
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    return rows;
}

enum class Trend { increasing, decreasing, flat, mixed };

inline std::string to_string(Trend t) {
    switch (t) {
        case Trend::increasing: return "increasing";
        case Trend::decreasing: return "decreasing";
        case Trend::flat: return "flat";
        case Trend::mixed: return "mixed";
    }
    return "?";
}

/// flat when max/min < flat_ratio; otherwise strictly monotone or mixed.
inline Trend classify_trend(const std::vector<double>& v, double flat_ratio = 2.0) {
    if (v.empty()) return Trend::mixed;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*lo > 0.0 && *hi / *lo < flat_ratio) return Trend::flat;
    bool inc = true, dec = true;
    for (std::size_t k = 1; k < v.size(); ++k) {
        inc = inc && v[k] > v[k - 1];
        dec = dec && v[k] < v[k - 1];
    }
    return inc ? Trend::increasing : dec ? Trend::decreasing : Trend::mixed;
}

}  // namespace topnet
