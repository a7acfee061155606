// Quenched disorder on tridiagonal chain networks (bSSH, bBarrier).
#pragma once

#include "topnet/network.hpp"

#include <cstdint>
#include <random>

namespace topnet {

enum class DisorderClass { PH_symmetric, PH_breaking };

inline std::string to_string(DisorderClass c) {
    return c == DisorderClass::PH_symmetric ? "PH_symmetric" : "PH_breaking";
}

inline DisorderClass disorder_class_from_string(const std::string& s) {
    if (s == "PH_symmetric") return DisorderClass::PH_symmetric;
    if (s == "PH_breaking") return DisorderClass::PH_breaking;
    throw SpecError("unknown disorder class '" + s + "'");
}

struct DisorderConfig {
    double p = 0.0;
    DisorderClass cls = DisorderClass::PH_symmetric;
    std::uint64_t seed = 0;
    int N = 1;
    double onsite_scale = 1.0;  // diagonal noise width is p * onsite_scale

    void validate() const {
        if (!(p >= 0.0) || p >= 1.0) throw SpecError("disorder strength p must satisfy 0 <= p < 1");
        if (N < 1) throw SpecError("disorder sample count N must be positive");
        if (!(onsite_scale >= 0.0)) throw SpecError("onsite_scale must be >= 0");
    }
};

/// One quenched realization: a multiplicative factor per chain bond and an additive
/// offset per mode. Stored relative to the clean values so that the same realization can
/// be applied to every instant of a time-dependent schedule.
struct DisorderRealization {
    std::vector<double> bond_factor;  // 2L-1 entries, bond k joins modes k and k+1
    std::vector<double> onsite_shift; // 2L entries
    int resamples = 0;

    /// Applies the realization to a tridiagonal chain matrix.
    RealMatrix apply(const RealMatrix& clean) const {
        const auto n = clean.rows();
        if (static_cast<std::size_t>(n) != onsite_shift.size())
            throw SpecError("disorder realization dimension does not match the matrix");
        RealMatrix h = clean;
        for (Eigen::Index k = 0; k + 1 < n; ++k) {
            h(k, k + 1) *= bond_factor[static_cast<std::size_t>(k)];
            h(k + 1, k) = h(k, k + 1);
        }
        for (Eigen::Index k = 0; k < n; ++k) h(k, k) += onsite_shift[static_cast<std::size_t>(k)];
        return h;
    }
};

/// Draws realization `index` of the stream defined by cfg. Bond factors are
/// 1 + p*xi with xi standard normal; non-positive factors (a coupling sign flip) are
/// redrawn. Deterministic in (seed, index).
inline DisorderRealization sample_realization(int modes, const DisorderConfig& cfg, std::uint64_t index) {
    cfg.validate();
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x7d15u};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    DisorderRealization r;
    r.bond_factor.resize(static_cast<std::size_t>(std::max(modes - 1, 0)));
    for (auto& f : r.bond_factor) {
        for (;;) {
            f = 1.0 + cfg.p * normal(rng);
            if (f > 0.0) break;
            ++r.resamples;
        }
    }
    r.onsite_shift.assign(static_cast<std::size_t>(modes), 0.0);
    if (cfg.cls == DisorderClass::PH_breaking)
        for (auto& d : r.onsite_shift) d = cfg.p * cfg.onsite_scale * normal(rng);
    return r;
}

/// Lazily generated stream of disordered copies of a clean chain matrix.
class DisorderStream {
public:
    DisorderStream(CouplingMatrix clean, DisorderConfig cfg) : clean_(std::move(clean)), cfg_(cfg) {
        cfg_.validate();
        if (clean_.kind != ModelKind::bSSH && clean_.kind != ModelKind::bBarrier)
            throw SpecError("disorder applies to bSSH or bBarrier matrices");
    }

    int size() const { return cfg_.N; }

    DisorderRealization realization(int index) const {
        return sample_realization(clean_.dim(), cfg_, static_cast<std::uint64_t>(index));
    }

    CouplingMatrix operator[](int index) const {
        if (index < 0 || index >= cfg_.N) throw std::out_of_range("disorder realization index");
        const auto r = realization(index);
        CouplingMatrix m = clean_;
        m.entries = r.apply(clean_.entries);
        if (cfg_.cls == DisorderClass::PH_breaking && cfg_.p > 0.0) m.claims_sublattice = false;
        if (r.resamples > 0) m.warnings.push_back("resampled " + std::to_string(r.resamples) + " couplings");
        return m;
    }

private:
    CouplingMatrix clean_;
    DisorderConfig cfg_;
};

inline DisorderStream apply_disorder(const CouplingMatrix& clean, const DisorderConfig& cfg) {
    return DisorderStream(clean, cfg);
}

}  // namespace topnet
