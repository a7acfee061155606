// Acceptance gate. One PASS/FAIL line per criterion; `--only NAME` runs a single one.
// Tolerances are fixed here and nowhere else.

#include "topnet/topnet.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>

using namespace topnet;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v, int prec = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

// Largest pairwise circular distance in a set of phases.
double phase_spread(const std::vector<double>& phis) {
    double s = 0.0;
    for (double a : phis)
        for (double b : phis) s = std::max(s, phase_distance(a, b));
    return s;
}

Outcome phase_quantization() {
    constexpr double kTol = 1e-2;
    constexpr double kSpread = 0.5;
    constexpr int kPointsPerL = 20;
    double worst = 0.0, spread = 0.0;
    int points = 0;
    std::vector<double> barrier_phis;
    for (int L : {5, 6}) {
        for (int k = 0; k < kPointsPerL; ++k) {
            const double tau = 10.0 * L + 2.5 * k;
            const auto best = optimize_outermost(L, 1.0, tau, 0.02, 0.6, 0.01, 0.9);
            worst = std::max(worst, std::abs(std::abs(best.report.phi) - kPi / 2));
            ++points;
            const auto b = barrier_transfer(L, 1.0, 0.0, best.dw_min, 10.0, tau);
            barrier_phis.push_back(evolve(b, std::max(guard_steps(b), default_steps(b, 40.0))).phi);
        }
    }
    spread = phase_spread(barrier_phis);
    return {points >= 40 && worst <= kTol && spread > kSpread,
            std::to_string(points) + " branch points at L=5,6, max ||phi|-pi/2| = " + num(worst) +
                " (tol " + num(kTol) + "); barrier control spread = " + num(spread) + " rad (> " + num(kSpread) + ")"};
}

Outcome transfer_landmarks() {
    struct Case {
        int L;
        double tau, expect, window, loss_max;
    };
    bool ok = true;
    std::string d;
    for (const Case& c : {Case{5, 50.0, 0.26, 0.05, 1e-3}, Case{10, 100.0, 0.13, 0.03, 1e-4}}) {
        const auto best = optimize_outermost(c.L, 1.0, c.tau, 0.02, 0.6, 0.01, 0.9);
        const auto s = ssh_transfer(c.L, 1.0, best.dw_min, c.tau);
        const auto r = evolve(s);
        const bool pass = std::abs(best.dw_min - c.expect) <= c.window && r.loss() <= c.loss_max;
        ok = ok && pass;
        d += "L=" + std::to_string(c.L) + " tau=" + num(c.tau) + ": peak dw_min = " + num(best.dw_min, 4) + " (" +
             num(c.expect) + " +- " + num(c.window) + "), O = " + num(r.O, 7) + ", 1-E = " + num(r.loss(), 3) +
             " (<= " + num(c.loss_max) + "); ";
    }
    return {ok, d};
}

Outcome rescaled_spectrum() {
    constexpr double kTol = 1e-3;
    constexpr int kL = 200;
    double worst = 0.0, naive = 0.0;
    for (double a : {2.0, 3.3, 5.0, 8.0}) {
        const auto sol = solve_rescaled(a);
        const auto [s0, s1] = finite_rescaled_levels(kL, 1.0, a, FiniteSizeMap::symmetric);
        const auto [n0, n1] = finite_rescaled_levels(kL, 1.0, a, FiniteSizeMap::naive);
        worst = std::max({worst, std::abs(s0 - sol.lambda0), std::abs(s1 - sol.lambda1)});
        naive = std::max({naive, std::abs(n0 - sol.lambda0), std::abs(n1 - sol.lambda1)});
    }
    const double plan = plan_ratio(10.0);
    return {worst < kTol && std::abs(plan - 3.3) <= 0.1,
            "max |root - L=200 level| = " + num(worst, 3) + " (tol " + num(kTol) + ", (L+1/2) map; naive L map " +
                num(naive, 3) + "); plan_ratio(10) = " + num(plan, 5) + " (3.3 +- 0.1)"};
}

Outcome bound_scaling_criterion() {
    const std::vector<int> Ls{10, 30, 100, 300, 1000};
    const double k2 = *bound_scaling(Pulse::sine_squared(), Ls, 3.3).front().fit_exponent;
    const double k4 = *bound_scaling(Pulse::smoothed(4), Ls, 3.3).front().fit_exponent;
    const double a2 = *bound_scaling(Pulse::sine_squared(), {100000, 1000000}, 3.3).front().fit_exponent;
    const double a4 = *bound_scaling(Pulse::smoothed(4), {100000, 1000000}, 3.3).front().fit_exponent;
    const bool ok = k2 >= 1.45 && k2 <= 1.55 && k4 >= 1.15 && k4 <= 1.35;
    return {ok, "fit over L=10..1000: sine_squared " + num(k2, 4) + " (in [1.45,1.55]), smoothed_order_4 " +
                    num(k4, 4) + " (in [1.15,1.35]); asymptotic slopes at L=1e5..1e6: " + num(a2, 4) + ", " +
                    num(a4, 4)};
}

Outcome loss_ordering() {
    constexpr double kFlat = 2.0;
    const std::vector<int> Ls{5, 6, 8, 10, 12, 14, 16, 18, 20};
    bool ok = true;
    std::string d;
    for (double alpha : {0.0, 0.5, 1.0}) {
        const auto rows = scaling_study(alpha, 1.0, Ls, Pulse::sine_squared());
        std::vector<double> loss;
        for (const auto& r : rows) {
            if (!r.error.empty()) return {false, "L=" + std::to_string(r.L) + ": " + r.error};
            loss.push_back(*r.simulated_loss);
        }
        const Trend want = alpha == 0.0 ? Trend::increasing : alpha == 0.5 ? Trend::flat : Trend::decreasing;
        const Trend got = classify_trend(loss, kFlat);
        const auto [lo, hi] = std::minmax_element(loss.begin(), loss.end());
        ok = ok && got == want;
        d += "alpha=" + num(alpha) + ": " + to_string(got) + " (want " + to_string(want) + ", 1-E " + num(loss.front(), 3) +
             " .. " + num(loss.back(), 3) + ", max/min " + num(*hi / *lo, 3) + "); ";
    }
    return {ok, d};
}

Outcome disorder_dichotomy() {
    constexpr double kSymTol = 0.02;
    constexpr int kN = 200;
    DisorderStudy st;  // L=5, dw_min=0.26, tau0=50, window [25, 100], rel_tol 1e-2
    st.steps_per_unit = 20.0;
    const auto clean = run_disorder(st, {0.0, DisorderClass::PH_symmetric, 1, 1, 1.0});
    const auto sym = run_disorder(st, {0.05, DisorderClass::PH_symmetric, 2024, kN, 1.0});
    std::vector<DisorderReport> brk;
    for (double p : {0.02, 0.05, 0.1}) brk.push_back(run_disorder(st, {p, DisorderClass::PH_breaking, 2024, kN, 1.0}));
    const auto& b05 = brk[1];
    const bool sym_ok = std::abs(sym.mean_O - clean.mean_O) <= kSymTol;
    const bool lower = b05.mean_O < sym.mean_O && b05.std_O > sym.std_O;
    const bool mono = clean.mean_O > brk[0].mean_O && brk[0].mean_O > brk[1].mean_O && brk[1].mean_O > brk[2].mean_O;
    const int failures = sym.failures + b05.failures + brk[0].failures + brk[2].failures;
    return {sym_ok && lower && mono && failures == 0,
            "clean O = " + num(clean.mean_O) + "; PH_symmetric p=0.05: <<O>> = " + num(sym.mean_O) + " sd " +
                num(sym.std_O, 3) + "; PH_breaking p=0.02/0.05/0.1: <<O>> = " + num(brk[0].mean_O) + "/" +
                num(brk[1].mean_O) + "/" + num(brk[2].mean_O) + ", sd at 0.05 = " + num(b05.std_O, 3) +
                "; N=" + std::to_string(kN) + ", failures " + std::to_string(failures)};
}

GateConfig gate_config() {
    GateConfig c;
    c.L = 10;
    c.transfer_tau = 200.0;
    return c;
}

Outcome cp_gate_criterion() {
    constexpr double kEntry = 1e-2, kLedger = 1e-2;
    const GateNetwork net(gate_config());
    const auto rep = cp_gate(net);
    const double ledger = ledger_defect(rep);
    std::string phases;
    for (const auto& s : rep.steps) phases += num(s.phase, 5) + " ";
    return {rep.entry_error < kEntry && ledger < kLedger,
            "L=10: entry error " + num(rep.entry_error, 3) + " (< " + num(kEntry) + "), ledger defect " +
                num(ledger, 3) + " rad (< " + num(kLedger) + "), step phases [" + phases + "], transfer O " +
                num(rep.transfer_O, 7)};
}

Outcome swap_gate_criterion() {
    constexpr double kFidelity = 0.99;
    const GateNetwork net(gate_config());
    const auto rep = swap_gate(net);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    double worst = 1.0;
    for (int k = 0; k < 6; ++k) {
        ComplexVector psi(4);
        for (int i = 0; i < 4; ++i) psi(i) = Complex(g(rng), g(rng));
        psi /= psi.norm();
        ComplexVector ideal = psi;
        std::swap(ideal(1), ideal(2));
        worst = std::min(worst, state_fidelity(ideal, apply_logical(rep, psi)));
    }
    return {worst >= kFidelity, "L=10: min state fidelity over 6 random inputs " + num(worst, 8) + " (>= " +
                                    num(kFidelity) + "), gate fidelity " + num(rep.fidelity, 8)};
}

Outcome obstruction_2d() {
    constexpr double kObstructed = 0.01, kFeasible = 0.9, kLifted = 0.5, kAblation = 0.3;
    const auto lat = build_honeycomb(2, 2, Geometry::emanating_chains);
    auto idx = [&](const Lattice2D& l, const std::string& name) {
        for (std::size_t k = 0; k < l.terminals.size(); ++k)
            if (l.terminals[k].qubit == name) return static_cast<int>(k);
        throw std::runtime_error("no terminal " + name);
    };
    const ObstructionScan scan{{0.5, 0.7, 0.9}, {60, 90, 120, 150, 180, 210, 240}};
    double same = 0.0, opposite = 1.0;
    for (auto [a, b] : std::vector<std::pair<std::string, std::string>>{{"L0", "R1"}, {"L1", "R0"}})
        same = std::max(same, verify_obstruction(lat, idx(lat, a), idx(lat, b), scan).max_O);
    for (auto [a, b] : std::vector<std::pair<std::string, std::string>>{{"L0", "R0"}, {"L1", "R1"}})
        opposite = std::min(opposite, verify_obstruction(lat, idx(lat, a), idx(lat, b), scan).max_O);
    const auto ablated = with_same_parity_couplings(lat, kAblation);
    const double lifted = verify_obstruction(ablated, idx(ablated, "L0"), idx(ablated, "R1"), scan).max_O;
    return {same < kObstructed && opposite > kFeasible && lifted > kLifted,
            "2x2 honeycomb with stubs, 21-point scan: same-parity max O = " + num(same, 3) + " (< " +
                num(kObstructed) + "), opposite-parity max O >= " + num(opposite, 5) + " (> " + num(kFeasible) +
                "), with same-parity couplings " + num(kAblation) + ": " + num(lifted, 4) + " (> " + num(kLifted) + ")"};
}

Outcome invariants() {
    constexpr double kUnitary = 1e-9, kSymmetry = 1e-10, kHalving = 1e-8;
    // Unitarity of the full propagator at default resolution.
    const auto s = ssh_transfer(5, 1.0, 0.26, 50.0);
    const int n = default_steps(s);
    const ComplexMatrix U = propagate(s, ComplexMatrix(ComplexMatrix::Identity(10, 10)), 0.0, s.tau, n);
    const double unitary = (U.adjoint() * U - ComplexMatrix::Identity(10, 10)).cwiseAbs().maxCoeff();

    // PH spectrum symmetry over PH-symmetric disorder realizations.
    double asym = 0.0;
    const auto stream = apply_disorder(build(NetworkSpec::ssh(20, 0.6, 1.0)), {0.2, DisorderClass::PH_symmetric, 3, 50, 1.0});
    for (int i = 0; i < stream.size(); ++i)
        asym = std::max(asym, spectrum_asymmetry(diagonalize(stream[i]).eigenvalues, 0.0));

    // Step halving of (O, E) at the default step count.
    const auto a = evolve(s, n), b = evolve(s, 2 * n);
    const double halving = std::max(std::abs(a.O - b.O), std::abs(a.E - b.E));

    // Byte-identical serialization across reruns and worker counts.
    const SweepGrid grid{{30, 45}, {0.25, 0.35, 0.45}};
    auto f = [](double tau, double dw) { return ssh_transfer(4, 1.0, dw, tau); };
    const std::string s1 = to_csv(sweep_table(sweep(grid, f, 40.0, 1)));
    const std::string s2 = to_csv(sweep_table(sweep(grid, f, 40.0, 3)));
    DisorderStudy st;
    st.L = 3;
    st.dw_min = 0.4;
    st.tau0 = 30.0;
    st.steps_per_unit = 20.0;
    const DisorderConfig dc{0.1, DisorderClass::PH_breaking, 9, 6, 1.0};
    auto dis = [&](unsigned w) {
        const auto r = run_disorder(st, dc, w);
        std::string out;
        for (const auto& x : r.runs) out += fmt(x.tau) + "," + fmt(x.O) + "," + fmt(x.E) + "\n";
        return out + fmt(r.mean_O) + "," + fmt(r.std_O);
    };
    const bool identical = s1 == s2 && s1 == to_csv(sweep_table(sweep(grid, f, 40.0, 1))) && dis(1) == dis(3);

    return {unitary < kUnitary && asym < kSymmetry && halving < kHalving && identical,
            "unitarity " + num(unitary, 3) + " (< " + num(kUnitary) + "), PH asymmetry " + num(asym, 3) + " (< " +
                num(kSymmetry) + "), step halving at " + std::to_string(n) + " steps " + num(halving, 3) + " (< " +
                num(kHalving) + "), reruns byte-identical: " + (identical ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    const std::vector<std::pair<std::string, Outcome (*)()>> criteria{
        {"phase_quantization", phase_quantization},
        {"transfer_landmarks", transfer_landmarks},
        {"rescaled_spectrum", rescaled_spectrum},
        {"bound_scaling", bound_scaling_criterion},
        {"loss_ordering", loss_ordering},
        {"disorder_dichotomy", disorder_dichotomy},
        {"cp_gate", cp_gate_criterion},
        {"swap_gate", swap_gate_criterion},
        {"obstruction_2d", obstruction_2d},
        {"invariants", invariants},
    };
    std::string only;
    for (int k = 1; k + 1 < argc; ++k)
        if (std::string(argv[k]) == "--only") only = argv[k + 1];
    int failed = 0, ran = 0;
    for (const auto& [name, fn] : criteria) {
        if (!only.empty() && name != only) continue;
        ++ran;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
        failed += !o.pass;
    }
    if (ran == 0) {
        std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
        return 2;
    }
    return failed ? 1 : 0;
}
