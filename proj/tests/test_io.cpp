#include "topnet/report_io.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace topnet;

namespace {

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Config, ParsesValuesAndComments) {
    const auto c = Config::parse_string("# header\nschema_version = 1\nL = 5   # trailing\nname = a b\nxs = 1, 2.5 ,3\n\n");
    EXPECT_NO_THROW(c.require_schema());
    EXPECT_EQ(c.get_int("L"), 5);
    EXPECT_EQ(c.get_string("name"), "a b");
    EXPECT_EQ(c.get_doubles("xs"), (std::vector<double>{1, 2.5, 3}));
    EXPECT_THROW(c.get_ints("xs"), ConfigError);
    EXPECT_EQ(c.get_double("missing", 0.5), 0.5);
    EXPECT_EQ(c.resolved().at("missing"), "0.5");
    EXPECT_NO_THROW(c.check_unused());
}

TEST(Config, Diagnostics) {
    EXPECT_NE(message_of([] { Config::parse_string("a = 1\nb = 2\na = 3\n", "f.cfg"); }).find("f.cfg:3"),
              std::string::npos);
    EXPECT_NE(message_of([] { Config::parse_string("a = 1\nnot a pair\n", "f.cfg"); }).find("f.cfg:2"),
              std::string::npos);
    const auto c = Config::parse_string("schema_version = 1\nL = five\nx = 1.5e\nflag = maybe\nspare = 1\n", "g.cfg");
    EXPECT_NE(message_of([&] { c.get_int("L"); }).find("g.cfg:2: key 'L'"), std::string::npos);
    EXPECT_THROW(c.get_double("x"), ConfigError);
    EXPECT_THROW(c.get_bool("flag", false), ConfigError);
    EXPECT_NE(message_of([&] { c.get_string("absent"); }).find("missing required key 'absent'"), std::string::npos);
    c.require_schema();
    EXPECT_NE(message_of([&] { c.check_unused(); }).find("'spare' (line 5)"), std::string::npos);
    EXPECT_THROW(Config::parse_string("schema_version = 2\n").require_schema(), ConfigError);
    EXPECT_THROW(Config::parse_string("L = 1\n").require_schema(), ConfigError);
    EXPECT_THROW(Config::load("/nonexistent/file.cfg"), ConfigError);
}

TEST(Config, ShortestRoundTripDoubles) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int k = 0; k < 1000; ++k) {
        const double v = u(rng);
        EXPECT_EQ(std::stod(detail::format_double(v)), v);
    }
    EXPECT_EQ(detail::format_double(0.1), "0.1");
    EXPECT_EQ(detail::format_double(0.25), "0.25");
}

TEST(Config, NetworkSpecRoundTrip) {
    NetworkSpec s = NetworkSpec::ssh(3, 0.0, 0.0, 0.1);
    s.w = {0.1, 1.0 / 3.0, 0.7};
    s.t = {1.0, 0.9};
    s.omega = {0.1, 0.2, 0.1, 0.1, 0.3, 0.1};
    const auto c = Config::parse_string(write_network_spec(s));
    c.require_schema();
    const auto r = read_network_spec(c);
    EXPECT_EQ(r.kind, s.kind);
    EXPECT_EQ(r.w, s.w);
    EXPECT_EQ(r.t, s.t);
    EXPECT_EQ(r.omega, s.omega);
    EXPECT_EQ(r.delta, s.delta);
    EXPECT_NO_THROW(c.check_unused());

    const auto b = read_network_spec(Config::parse_string(write_network_spec(NetworkSpec::barrier(4, 1.0, 0.2, 3.0))));
    EXPECT_EQ(b.omega_barrier, 3.0);
    EXPECT_EQ(build(b).entries(3, 3), 3.0);
}

TEST(Config, NetworkSpecShorthandAndErrors) {
    const auto s = read_network_spec(Config::parse_string("model = bSSH\nL = 4\ntbar = 1\nwbar = 0.3\n"));
    EXPECT_EQ(s.w, std::vector<double>(4, 0.3));
    EXPECT_EQ(s.t, std::vector<double>(3, 1.0));
    EXPECT_THROW(read_network_spec(Config::parse_string("model = bSSH\nL = 4\nw = 1, 2\n")), ConfigError);
    EXPECT_THROW(read_network_spec(Config::parse_string("model = bSSH\nL = 0\n")), ConfigError);
    EXPECT_THROW(read_network_spec(Config::parse_string("model = nope\nL = 2\n")), SpecError);
}

TEST(Config, PulseRoundTrip) {
    for (const auto& p : {Pulse::sine_squared(), Pulse::smoothed(6), Pulse::tabulated({0, 0.3, 0.5, 1}, {0, 0.6, 1, 0})}) {
        const auto r = read_pulse(Config::parse_string(write_pulse(p)));
        EXPECT_EQ(r.id(), p.id());
        for (double s : {0.1, 0.4, 0.8}) EXPECT_DOUBLE_EQ(r.value(s), p.value(s));
    }
    EXPECT_THROW(read_pulse(Config::parse_string("pulse = smoothed\npulse_order = 3\n")), ConfigError);
    EXPECT_THROW(read_pulse(Config::parse_string("pulse = square\n")), ConfigError);
}

TEST(MatrixText, RoundTrip) {
    const auto m = build(NetworkSpec::ssh(3, 1.0 / 7.0, 0.9, 0.05));
    std::istringstream in(write_matrix_text(m));
    const auto r = read_matrix_text(in);
    EXPECT_EQ(r.labels, m.basis_labels);
    EXPECT_EQ(r.entries, m.entries);
    std::istringstream bad("1 2\n3\n");
    EXPECT_THROW(read_matrix_text(bad), ConfigError);
}

TEST(Csv, RoundTripAndSchemaCheck) {
    CsvTable t{csv_schemas().at("sweep"), {{"10", "0.25", "0.99", "-1.5707963267948966", "0.999"},
                                           {"10", "0.3", "nan", "nan", "nan"}}};
    const auto r = parse_csv(to_csv(t), "sweep");
    EXPECT_EQ(r.rows, t.rows);
    EXPECT_DOUBLE_EQ(r.number(0, "O"), 0.99);
    EXPECT_TRUE(std::isnan(r.number(1, "E")));
    EXPECT_THROW(r.column("nope"), ConfigError);
    EXPECT_THROW(parse_csv("tau,O\n1,2\n", "sweep"), ConfigError);
    EXPECT_THROW(parse_csv("tau,param,O,phi,E\n1,2\n", "sweep"), ConfigError);
    EXPECT_NO_THROW(parse_csv("t,pop_1,pop_1bar\n0,1,0\n", "timeseries"));
    EXPECT_THROW(parse_csv("", "sweep"), ConfigError);
}

TEST(Csv, TablesFollowSchemas) {
    const auto spec = diagonalize(build(NetworkSpec::ssh(3, 0.2, 1.0)));
    const auto st = parse_csv(to_csv(spectrum_table(spec)), "spectrum");
    ASSERT_EQ(st.rows.size(), 6u);
    EXPECT_EQ(st.rows[2][2], "1");
    EXPECT_DOUBLE_EQ(st.number(0, "eigenvalue"), spec.eigenvalues(0));

    const auto s = ssh_transfer(2, 1.0, 0.5, 10.0);
    EvolveOptions opt;
    opt.record_every = 50;
    const auto rep = evolve(s, 500, opt);
    const auto ts = parse_csv(to_csv(timeseries_table(rep.timeseries, rep.final_state.basis_labels)), "timeseries");
    EXPECT_EQ(ts.header.back(), "pop_2bar");
    EXPECT_EQ(ts.rows.size(), 11u);

    ScalingRow row;
    row.L = 5;
    row.tau = 2.0;
    const auto sc = parse_csv(to_csv(scaling_table({row})), "scaling");
    EXPECT_TRUE(std::isnan(sc.number(0, "simulated_loss")));
}

TEST(EdgeList, RoundTrip) {
    const auto lat = with_same_parity_couplings(build_honeycomb(2, 2, Geometry::emanating_chains), 0.1);
    const auto entries = parse_edge_list(lattice_edge_list(lat));
    ASSERT_EQ(entries.size(), lat.bonds.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
        EXPECT_EQ(entries[k].a, lat.bonds[k].a);
        EXPECT_EQ(entries[k].b, lat.bonds[k].b);
        EXPECT_EQ(entries[k].amplitude, lat.bonds[k].amplitude);
        EXPECT_EQ(entries[k].kind, to_string(lat.bonds[k].kind));
    }
    EXPECT_THROW(parse_edge_list("1 2 x\n"), ConfigError);
}

TEST(Json, GateAndObstructionFields) {
    GateReport g;
    g.gate = "CP";
    g.truth_table = ComplexMatrix::Identity(4, 4);
    const auto j = Json::parse(gate_json(g).dump());
    EXPECT_EQ(j["truth_table"]["real"][3][3], 1.0);
    EXPECT_EQ(j["basis"][2], "10");
    ObstructionReport o;
    o.max_O = 0.5;
    EXPECT_EQ(obstruction_json(o)["obstruction_holds"], false);
}
