// topnet: batch front end. Every subcommand reads a key = value config and writes
// CSV / JSON artifacts plus manifest.json into --out.
//
// exit codes: 0 success, 2 configuration error, 3 numerical failure

#include "topnet/topnet.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

namespace fs = std::filesystem;
using namespace topnet;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct Options {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    std::optional<int> steps;
};

class Run {
public:
    Run(std::string command, const Options& opt, Config cfg)
        : command_(std::move(command)), opt_(opt), cfg_(std::move(cfg)) {
        cfg_.require_schema();
        if (cfg_.has("command") && cfg_.get_string("command") != command_)
            throw cfg_.error("command", "config is for '" + cfg_.get_string("command") + "', not '" + command_ + "'");
        fs::create_directories(opt_.out);
    }

    const Config& cfg() const { return cfg_; }
    const Options& opt() const { return opt_; }

    std::uint64_t seed() const {
        const auto from_config = static_cast<std::uint64_t>(cfg_.get_int("seed", 0));
        return opt_.seed ? *opt_.seed : from_config;
    }

    double steps_per_unit(double fallback) const {
        return opt_.steps ? static_cast<double>(*opt_.steps) : cfg_.get_double("steps_per_unit", fallback);
    }

    void write(const std::string& name, const std::string& text) {
        write_text(fs::path(opt_.out) / name, text);
        outputs_.push_back(name);
    }
    void write(const std::string& name, const CsvTable& t) { write(name, to_csv(t)); }
    void write(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

    void finish(double seconds) {
        cfg_.check_unused();
        Json m;
        m["command"] = command_;
        m["tool_version"] = kToolVersion;
        m["schema_version"] = kSchemaVersion;
        m["seed"] = seed();
        m["workers"] = opt_.workers;
        if (opt_.steps) m["steps"] = *opt_.steps;
        m["config_source"] = cfg_.source();
        Json c;
        for (const auto& [k, v] : cfg_.resolved()) c[k] = v;
        m["config"] = c;
        m["outputs"] = outputs_;
        m["wall_clock_seconds"] = seconds;
        write_text(fs::path(opt_.out) / "manifest.json", m.dump(2) + "\n");
    }

private:
    std::string command_;
    Options opt_;
    Config cfg_;
    std::vector<std::string> outputs_;
};

// ---------------------------------------------------------------------------

ProtocolSchedule transfer_schedule(const Config& c, double tau) {
    const auto kind = model_kind_from_string(c.get_string("model", "bSSH"));
    const int L = static_cast<int>(c.get_int("L"));
    const double tbar = c.get_double("tbar", 1.0);
    switch (kind) {
        case ModelKind::bSSH: {
            const double dw = c.has("w_max") ? tbar - c.get_double("w_max") : c.get_double("dw_min");
            auto s = ssh_transfer(L, tbar, dw, tau, read_pulse(c));
            s.floor = c.get_double("w_min", 0.0);
            s.validate();
            return s;
        }
        case ModelKind::bMC: return mc_transfer(L, tbar, c.get_double("domega_max"), tau);
        case ModelKind::bBarrier:
            return barrier_transfer(L, tbar, c.get_double("omega_edge", 0.0), c.get_double("omega_min"),
                                    c.get_double("omega_max"), tau);
        case ModelKind::bProp: return prop_transfer(L, c.get_double("t_max"), tau, c.get_double("omega_bar", 0.0));
    }
    throw SpecError("unreachable");
}

int cmd_transfer(Run& run) {
    const auto& c = run.cfg();
    ProtocolSchedule s;
    std::optional<double> optimized;
    if (c.get_bool("optimize", false)) {
        if (c.get_string("model", "bSSH") != "bSSH") throw c.error("optimize", "dw_min optimization needs model = bSSH");
        const int L = static_cast<int>(c.get_int("L"));
        const double tbar = c.get_double("tbar", 1.0);
        const auto best = optimize_outermost(L, tbar, c.get_double("tau"), c.get_double("dw_lo", 0.02),
                                             c.get_double("dw_hi", 0.6), c.get_double("dw_step", 0.01), 0.9,
                                             run.steps_per_unit(40.0), read_pulse(c));
        optimized = best.dw_min;
        s = ssh_transfer(L, tbar, best.dw_min, c.get_double("tau"), read_pulse(c));
    } else {
        s = transfer_schedule(c, c.get_double("tau"));
    }
    const int steps = run.opt().steps ? *run.opt().steps : std::max(guard_steps(s), default_steps(s));
    EvolveOptions eo;
    eo.record_every = static_cast<int>(c.get_int("record_every", std::max(1, steps / 400)));
    const auto r = evolve(s, steps, eo);

    run.write("timeseries.csv", timeseries_table(r.timeseries, r.final_state.basis_labels));
    Json j;
    j["model"] = to_string(s.base.kind);
    j["L"] = s.base.L;
    j["tau"] = s.tau;
    j["pulse"] = s.pulse.id();
    if (optimized) j["dw_min_optimized"] = *optimized;
    j["transfer"] = transfer_json(r);
    j["phase_class"] = to_string(phase_check(r, s.base.L));
    run.write("summary.json", j);
    return 0;
}

int cmd_sweep(Run& run) {
    const auto& c = run.cfg();
    const auto kind = model_kind_from_string(c.get_string("model", "bSSH"));
    if (kind != ModelKind::bSSH && kind != ModelKind::bBarrier)
        throw c.error("model", "sweep supports bSSH (param = dw_min) and bBarrier (param = omega_min)");
    SweepGrid grid{c.get_doubles("taus"), c.get_doubles("params")};
    if (grid.taus.empty() || grid.params.empty()) throw c.error("taus", "sweep grid must be non-empty");
    const int L = static_cast<int>(c.get_int("L"));
    const double tbar = c.get_double("tbar", 1.0);
    const Pulse pulse = read_pulse(c);
    const double omega_edge = kind == ModelKind::bBarrier ? c.get_double("omega_edge", 0.0) : 0.0;
    const double omega_max = kind == ModelKind::bBarrier ? c.get_double("omega_max") : 0.0;
    ScheduleFactory f = [&](double tau, double param) {
        if (kind == ModelKind::bSSH) return ssh_transfer(L, tbar, param, tau, pulse);
        return barrier_transfer(L, tbar, omega_edge, param, omega_max, tau);
    };
    const auto cells = sweep(grid, f, run.steps_per_unit(40.0), run.opt().workers);
    run.write("sweep.csv", sweep_table(cells));
    Json j;
    j["model"] = to_string(kind);
    j["L"] = L;
    j["cells"] = cells.size();
    Json errors = Json::array();
    for (std::size_t k = 0; k < cells.size(); ++k)
        if (!cells[k].error.empty())
            errors.push_back({{"index", k}, {"tau", cells[k].tau}, {"param", cells[k].param}, {"error", cells[k].error}});
    j["failed_cells"] = errors;
    run.write("sweep.json", j);
    return errors.empty() ? 0 : 3;
}

int cmd_scaling(Run& run) {
    const auto& c = run.cfg();
    ScalingOptions o;
    o.dw_prime_min = c.get_double("dw_prime_min", 3.3);
    o.tbar = c.get_double("tbar", 1.0);
    o.C1 = c.get_double("C1", 1.0);
    o.C2 = c.get_double("C2", 1.0);
    o.simulate = c.get_bool("simulate", true);
    o.steps_per_unit = run.steps_per_unit(200.0);
    o.workers = run.opt().workers;
    const double alpha = c.get_double("alpha");
    const auto rows = scaling_study(alpha, c.get_double("tau0"), c.get_ints("Ls"), read_pulse(c), o);
    run.write("scaling.csv", scaling_table(rows));
    std::vector<double> loss;
    bool failed = false;
    for (const auto& r : rows) {
        failed = failed || !r.error.empty();
        if (r.simulated_loss) loss.push_back(*r.simulated_loss);
    }
    Json j;
    j["alpha"] = alpha;
    if (!loss.empty()) j["loss_trend"] = to_string(classify_trend(loss));
    Json errors = Json::array();
    for (const auto& r : rows)
        if (!r.error.empty()) errors.push_back({{"L", r.L}, {"error", r.error}});
    j["failed_rows"] = errors;
    run.write("scaling.json", j);
    return failed ? 3 : 0;
}

int cmd_bound(Run& run) {
    const auto& c = run.cfg();
    const Pulse pulse = read_pulse(c);
    const auto Ls = c.get_ints("Ls");
    const double dw = c.get_double("dw_prime_min", 3.3);
    auto rows = bound_scaling(pulse, Ls, dw, c.get_double("C1", 1.0), c.get_double("C2", 1.0));
    if (c.has("tau")) {
        const double tau = c.get_double("tau");
        for (auto& r : rows) {
            r.tau = tau;
            r.loss_bound = r.bound_at(tau);
        }
    }
    run.write("bound.csv", bound_table(rows));
    Json j;
    j["pulse"] = pulse.id();
    j["dw_prime_min"] = dw;
    if (!rows.empty() && rows.front().fit_exponent) j["fit_exponent"] = *rows.front().fit_exponent;
    Json per = Json::array();
    for (const auto& r : rows)
        per.push_back({{"L", r.L}, {"epsilon_L", r.epsilon_L}, {"J1", r.J1}, {"J2", r.J2}, {"C_L", r.C_L}});
    j["rows"] = per;
    run.write("bound.json", j);
    return 0;
}

int cmd_disorder(Run& run) {
    const auto& c = run.cfg();
    DisorderStudy st;
    st.L = static_cast<int>(c.get_int("L", 5));
    st.tbar = c.get_double("tbar", 1.0);
    st.dw_min = c.get_double("dw_min", 0.26);
    st.tau0 = c.get_double("tau0", 50.0);
    st.window_lo = c.get_double("window_lo", 0.5);
    st.window_hi = c.get_double("window_hi", 2.0);
    st.rel_tol = c.get_double("rel_tol", 1e-2);
    st.retune = c.get_bool("retune", true);
    st.steps_per_unit = run.steps_per_unit(40.0);
    std::vector<DisorderClass> classes;
    for (const auto& s : detail::split(c.get_string("classes", "PH_symmetric, PH_breaking"), ','))
        classes.push_back(disorder_class_from_string(s));
    const auto ps = c.get_doubles("p", {0.05});
    const int N = static_cast<int>(c.get_int("N", 200));
    const double onsite = c.get_double("onsite_scale", 1.0);

    CsvTable runs{csv_schemas().at("disorder_realizations"), {}};
    CsvTable summary{csv_schemas().at("disorder_summary"), {}};
    Json j = Json::array();
    int failures = 0;
    for (auto cls : classes)
        for (double p : ps) {
            DisorderConfig dc{p, cls, run.seed(), N, onsite};
            const auto rep = run_disorder(st, dc, run.opt().workers);
            failures += rep.failures;
            for (const auto& r : rep.runs)
                runs.rows.push_back({to_string(cls), fmt(p), std::to_string(r.index), fmt(r.tau), fmt(r.O), fmt(r.E),
                                     fmt(r.phi), std::to_string(r.resamples)});
            summary.rows.push_back({to_string(cls), fmt(p), std::to_string(N), fmt(rep.mean_O), fmt(rep.std_O),
                                    fmt(rep.mean_E), fmt(rep.std_E)});
            j.push_back({{"class", to_string(cls)}, {"p", p}, {"N", N}, {"failures", rep.failures},
                         {"mean_O", rep.mean_O}, {"std_O", rep.std_O}, {"mean_E", rep.mean_E}, {"std_E", rep.std_E}});
        }
    run.write("disorder_realizations.csv", runs);
    run.write("disorder_summary.csv", summary);
    run.write("disorder.json", Json{{"L", st.L}, {"tau0", st.tau0}, {"ensembles", j}});
    return failures ? 3 : 0;
}

int cmd_gate(Run& run) {
    const auto& c = run.cfg();
    GateConfig g;
    g.L = static_cast<int>(c.get_int("L", 10));
    g.tbar = c.get_double("tbar", 1.0);
    g.transfer_tau = c.get_double("transfer_tau", 20.0 * g.L);
    if (c.has("transfer_dw_min")) g.transfer_dw_min = c.get_double("transfer_dw_min");
    g.pulse_duration = c.get_double("pulse_duration", 0.0);
    g.steps_per_unit = run.steps_per_unit(200.0);
    g.infidelity_budget = c.get_double("infidelity_budget", 1e-2);
    const GateNetwork net(g);
    bool failed = false;
    for (const auto& name : detail::split(c.get_string("gates", "cp, swap"), ',')) {
        if (name == "cp") {
            const auto r = cp_gate(net, true);
            failed = failed || r.failed;
            run.write("gate_cp.json", gate_json(r));
            run.write("gate_cp_timeseries.csv", timeseries_table(r.timeseries, net.labels()));
        } else if (name == "swap") {
            const auto r = swap_gate(net);
            failed = failed || r.failed;
            run.write("gate_swap.json", gate_json(r));
        } else {
            throw c.error("gates", "unknown gate '" + name + "'");
        }
    }
    return failed ? 3 : 0;
}

int terminal_by_name(const Lattice2D& lat, const Config& c, const std::string& key) {
    const std::string name = c.get_string(key);
    for (std::size_t k = 0; k < lat.terminals.size(); ++k)
        if (lat.terminals[k].qubit == name) return static_cast<int>(k);
    throw c.error(key, "unknown terminal '" + name + "'");
}

int cmd_lattice2d(Run& run) {
    const auto& c = run.cfg();
    LatticeParams lp;
    lp.tbar = c.get_double("tbar", 1.0);
    lp.cross = c.get_double("cross", 1.0);
    lp.stub_cells = static_cast<int>(c.get_int("stub_cells", 3));
    auto lat = build_honeycomb(static_cast<int>(c.get_int("rows")), static_cast<int>(c.get_int("cols")),
                               geometry_from_string(c.get_string("geometry", "boundary_terminals")), lp);
    if (c.has("ablation")) lat = with_same_parity_couplings(lat, c.get_double("ablation"));
    const std::string mode = c.get_string("mode", "obstruction");
    Json j;
    j["rows"] = lat.rows;
    j["cols"] = lat.cols;
    j["geometry"] = to_string(lat.geometry);
    j["nodes"] = lat.size();
    j["bipartite"] = lat.bipartite();
    if (mode == "path") {
        PathActivation act;
        for (int n : c.get_ints("path")) act.path.push_back(n);
        act.tbar = lp.tbar;
        act.dw_min = c.get_double("dw_min");
        act.tau = c.get_double("tau");
        act.stray = c.get_double("stray", 0.0);
        act.pulse = read_pulse(c);
        const auto s = activate_path(lat, act);
        const auto r = evolve(s, run.steps_per_unit(200.0));
        run.write("lattice_edges.txt", lattice_edge_list(lat));
        j["mode"] = "path";
        j["stray"] = act.stray;
        j["transfer"] = transfer_json(r);
    } else if (mode == "obstruction") {
        const int a = terminal_by_name(lat, c, "terminal_a"), b = terminal_by_name(lat, c, "terminal_b");
        ObstructionScan scan{c.get_doubles("w_max"), c.get_doubles("taus")};
        const auto rep = verify_obstruction(lat, a, b, scan, run.opt().workers, run.steps_per_unit(40.0));
        CsvTable t{csv_schemas().at("obstruction"), {}};
        for (const auto& p : rep.points)
            t.rows.push_back({rep.terminal_a + "-" + rep.terminal_b, fmt(p.w_max), fmt(p.tau), fmt(p.O), fmt(p.E)});
        run.write("lattice_edges.txt", lattice_edge_list(lat));
        run.write("obstruction.csv", t);
        j["mode"] = "obstruction";
        j["report"] = obstruction_json(rep);
    } else {
        throw c.error("mode", "expected 'path' or 'obstruction'");
    }
    run.write("lattice2d.json", j);
    return 0;
}

int cmd_spectrum(Run& run) {
    const auto& c = run.cfg();
    const auto spec = read_network_spec(c);
    const auto m = build(spec);
    const auto rep = diagonalize(m);
    run.write("spectrum.csv", spectrum_table(rep));
    run.write("matrix.txt", write_matrix_text(m));
    Json j = spectrum_json(rep);
    j["model"] = to_string(spec.kind);
    j["L"] = spec.L;
    j["warnings"] = m.warnings;
    if (c.has("dw_prime")) {
        const auto sol = solve_rescaled(c.get_double("dw_prime"));
        j["rescaled"] = {{"dw_prime", sol.dw_prime}, {"lambda0", sol.lambda0}, {"lambda1", sol.lambda1},
                         {"ratio", sol.ratio()}};
    }
    if (c.has("R_target")) j["plan_ratio"] = {{"R_target", c.get_double("R_target")},
                                              {"dw_prime", plan_ratio(c.get_double("R_target"))}};
    run.write("spectrum.json", j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topnet: topological bosonic network simulator"};
    app.require_subcommand(1);
    Options opt;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"transfer", "single state transfer with amplitude time series"},
        {"sweep", "transfer figures of merit over a (tau, parameter) grid"},
        {"scaling", "simulated loss and bound for tau = tau0 L^(1+alpha)"},
        {"bound", "adiabatic bound C_L[P] over a list of L"},
        {"disorder", "disorder ensembles with per-realization tau retuning"},
        {"gate", "CP and SWAP gate protocols"},
        {"lattice2d", "2D path activation or same-parity obstruction scan"},
        {"spectrum", "exact diagonalization and rescaled spectrum"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config, "key = value configuration file")->required();
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--seed", opt.seed, "random seed (overrides the config)");
        sub->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--steps", opt.steps,
                        "integration steps: total for transfer, per unit of tau*max||H|| otherwise")
            ->check(CLI::PositiveNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    const auto start = std::chrono::steady_clock::now();
    try {
        Run run(command, opt, Config::load(opt.config));
        int rc = 0;
        if (command == "transfer") rc = cmd_transfer(run);
        else if (command == "sweep") rc = cmd_sweep(run);
        else if (command == "scaling") rc = cmd_scaling(run);
        else if (command == "bound") rc = cmd_bound(run);
        else if (command == "disorder") rc = cmd_disorder(run);
        else if (command == "gate") rc = cmd_gate(run);
        else if (command == "lattice2d") rc = cmd_lattice2d(run);
        else if (command == "spectrum") rc = cmd_spectrum(run);
        run.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        if (rc != 0) std::cerr << "topnet " << command << ": one or more runs failed; see outputs\n";
        return rc;
    } catch (const SpecError& e) {
        std::cerr << "topnet " << command << ": configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "topnet " << command << ": numerical failure: " << e.what() << "\n";
        return 3;
    }
}
