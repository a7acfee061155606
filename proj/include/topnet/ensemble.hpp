// Disorder ensembles of bSSH transfers with per-realization tau retuning.
#pragma once

#include "topnet/dynamics.hpp"

namespace topnet {

struct DisorderRun {
    int index = 0;
    double tau = 0.0;
    double O = 0.0;
    double E = 0.0;
    double phi = 0.0;
    int resamples = 0;
    std::string error;
};

struct DisorderReport {
    DisorderClass cls = DisorderClass::PH_symmetric;
    double p = 0.0;
    int N = 0;
    int failures = 0;
    double mean_O = 0.0, std_O = 0.0;
    double mean_E = 0.0, std_E = 0.0;
    std::vector<DisorderRun> runs;
};

struct DisorderStudy {
    int L = 5;
    double tbar = 1.0;
    double dw_min = 0.26;
    double tau0 = 50.0;
    double window_lo = 0.5;  // retuning window [lo, hi] * tau0
    double window_hi = 2.0;
    double rel_tol = 1e-2;
    bool retune = true;
    double steps_per_unit = 40.0;

    void validate() const {
        if (!(window_lo > 0.0 && window_hi > window_lo)) throw SpecError("disorder retuning window must satisfy 0 < lo < hi");
        if (!(tau0 > 0.0)) throw SpecError("disorder tau0 must be > 0");
        if (!(rel_tol > 0.0)) throw SpecError("disorder rel_tol must be > 0");
    }
};

namespace detail {

inline std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    double m = 0.0;
    for (double x : v) m += x;
    m /= v.size();
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return {m, v.size() > 1 ? std::sqrt(s / (v.size() - 1)) : 0.0};
}

}  // namespace detail

/// Runs cfg.N realizations; each one retunes tau by golden section over the window to
/// maximize O. Results are stored in realization order whatever the worker count.
inline DisorderReport run_disorder(const DisorderStudy& study, const DisorderConfig& cfg, unsigned workers = 1) {
    study.validate();
    cfg.validate();
    DisorderReport rep;
    rep.cls = cfg.cls;
    rep.p = cfg.p;
    rep.N = cfg.N;
    rep.runs.resize(static_cast<std::size_t>(cfg.N));
    DisorderConfig scaled = cfg;
    scaled.onsite_scale = cfg.onsite_scale * study.tbar;
    parallel_for(rep.runs.size(), workers, [&](std::size_t i) {
        DisorderRun& run = rep.runs[i];
        run.index = static_cast<int>(i);
        try {
            const auto real = sample_realization(2 * study.L, scaled, i);
            run.resamples = real.resamples;
            auto factory = [&](double tau) {
                auto s = ssh_transfer(study.L, study.tbar, study.dw_min, tau);
                s.disorder = real;
                return s;
            };
            TransferReport r;
            if (study.retune) {
                std::tie(run.tau, r) = retune_tau(factory, study.window_lo * study.tau0, study.window_hi * study.tau0,
                                                  study.rel_tol, study.steps_per_unit);
            } else {
                run.tau = study.tau0;
                const auto s = factory(study.tau0);
                r = evolve(s, std::max(guard_steps(s), default_steps(s, study.steps_per_unit)));
            }
            run.O = r.O;
            run.E = r.E;
            run.phi = r.phi;
        } catch (const std::exception& e) {
            run.error = e.what();
        }
    });
    std::vector<double> O, E;
    for (const auto& r : rep.runs) {
        if (!r.error.empty()) {
            ++rep.failures;
            continue;
        }
        O.push_back(r.O);
        E.push_back(r.E);
    }
    std::tie(rep.mean_O, rep.std_O) = detail::mean_std(O);
    std::tie(rep.mean_E, rep.std_E) = detail::mean_std(E);
    return rep;
}

}  // namespace topnet
