// CSV and JSON exports with frozen column orders, and their readers.
#pragma once

#include "topnet/config.hpp"
#include "topnet/dynamics.hpp"
#include "topnet/ensemble.hpp"
#include "topnet/gates.hpp"
#include "topnet/lattice2d.hpp"
#include "topnet/scaling.hpp"
#include "topnet/spectral.hpp"

#include <json.hpp>

#include <filesystem>

namespace topnet {

using Json = nlohmann::ordered_json;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t k = 0; k < header.size(); ++k)
            if (header[k] == name) return k;
        throw ConfigError("csv: no column '" + name + "'");
    }

    double number(std::size_t row, const std::string& name) const {
        const std::string& v = rows.at(row).at(column(name));
        if (v == "nan") return std::numeric_limits<double>::quiet_NaN();
        return std::stod(v);
    }
};

/// Column contracts of the emitted CSV files. Time series files have one column per
/// mode after `t`, so only their first column is fixed.
inline const std::map<std::string, std::vector<std::string>>& csv_schemas() {
    static const std::map<std::string, std::vector<std::string>> s{
        {"spectrum", {"index", "eigenvalue", "edge_flag"}},
        {"timeseries", {"t"}},
        {"sweep", {"tau", "param", "O", "phi", "E"}},
        {"scaling", {"L", "tau", "C_L", "bound", "simulated_loss"}},
        {"disorder_realizations", {"class", "p", "index", "tau", "O", "E", "phi", "resamples"}},
        {"disorder_summary", {"class", "p", "N", "mean_O", "std_O", "mean_E", "std_E"}},
        {"obstruction", {"pair", "w_max", "tau", "O", "E"}},
    };
    return s;
}

inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    return detail::format_double(v);
}

inline std::string to_csv(const CsvTable& t) {
    std::string out;
    for (std::size_t k = 0; k < t.header.size(); ++k) out += (k ? "," : "") + t.header[k];
    out += "\n";
    for (const auto& r : t.rows) {
        for (std::size_t k = 0; k < r.size(); ++k) out += (k ? "," : "") + r[k];
        out += "\n";
    }
    return out;
}

/// Parses CSV text and checks the header against the named schema.
inline CsvTable parse_csv(const std::string& text, const std::string& schema) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("csv: empty input for schema '" + schema + "'");
    t.header = detail::split(line, ',');
    const auto& want = csv_schemas().at(schema);
    const bool prefix_only = schema == "timeseries";
    if (t.header.size() < want.size() || (!prefix_only && t.header.size() != want.size()) ||
        !std::equal(want.begin(), want.end(), t.header.begin()))
        throw ConfigError("csv: header '" + line + "' does not match schema '" + schema + "'");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = detail::split(line, ',');
        if (row.size() != t.header.size())
            throw ConfigError("csv: row with " + std::to_string(row.size()) + " fields, expected " +
                              std::to_string(t.header.size()));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

inline CsvTable spectrum_table(const SpectralReport& r) {
    CsvTable t{csv_schemas().at("spectrum"), {}};
    for (Eigen::Index k = 0; k < r.eigenvalues.size(); ++k)
        t.rows.push_back({std::to_string(k), fmt(r.eigenvalues(k)), r.is_edge(static_cast<int>(k)) ? "1" : "0"});
    return t;
}

inline Json spectrum_json(const SpectralReport& r) {
    Json j;
    j["dE_edge"] = r.dE_edge;
    j["dE_bulk"] = r.dE_bulk;
    j["R"] = std::isfinite(r.R) ? Json(r.R) : Json(nullptr);
    j["flagged"] = r.flagged;
    if (r.flagged) j["flag_reason"] = r.flag_reason;
    return j;
}

inline CsvTable timeseries_table(const std::vector<TimeSample>& series, const std::vector<std::string>& labels) {
    CsvTable t;
    t.header.push_back("t");
    for (const auto& l : labels) t.header.push_back("pop_" + l);
    for (const auto& s : series) {
        std::vector<std::string> row{fmt(s.t)};
        for (Eigen::Index k = 0; k < s.populations.size(); ++k) row.push_back(fmt(s.populations(k)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline Json transfer_json(const TransferReport& r) {
    Json j;
    j["O"] = r.O;
    j["phi"] = r.phi;
    j["E"] = r.E;
    j["loss"] = r.loss();
    j["norm_drift"] = r.norm_drift;
    j["steps"] = r.steps;
    return j;
}

inline CsvTable sweep_table(const std::vector<SweepCell>& cells) {
    CsvTable t{csv_schemas().at("sweep"), {}};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& c : cells) {
        const bool ok = c.report.has_value();
        t.rows.push_back({fmt(c.tau), fmt(c.param), fmt(ok ? c.report->O : nan), fmt(ok ? c.report->phi : nan),
                          fmt(ok ? c.report->E : nan)});
    }
    return t;
}

inline CsvTable scaling_table(const std::vector<ScalingRow>& rows) {
    CsvTable t{csv_schemas().at("scaling"), {}};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.L), fmt(r.tau), fmt(r.C_L), fmt(r.bound), fmt(r.simulated_loss.value_or(nan))});
    return t;
}

inline CsvTable bound_table(const std::vector<BoundReport>& rows) {
    CsvTable t{csv_schemas().at("scaling"), {}};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.L), fmt(r.tau.value_or(nan)), fmt(r.C_L),
                          fmt(r.tau ? r.C_L / *r.tau : nan), fmt(nan)});
    return t;
}

inline Json complex_matrix_json(const ComplexMatrix& m) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json rr = Json::array(), ii = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ii.push_back(m(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
    }
    return Json{{"real", re}, {"imag", im}};
}

inline Json gate_json(const GateReport& r) {
    Json j;
    j["gate"] = r.gate;
    j["L"] = r.L;
    j["basis"] = {"00", "01", "10", "11"};
    Json steps = Json::array();
    for (const auto& s : r.steps)
        steps.push_back({{"name", s.name},
                         {"phase", s.phase},
                         {"expected_phase", s.expected_phase},
                         {"probability", s.probability},
                         {"duration", s.duration},
                         {"bulk_admixture", s.bulk_admixture}});
    j["steps"] = steps;
    j["truth_table"] = complex_matrix_json(r.truth_table);
    j["fidelity"] = r.fidelity;
    j["entry_error"] = r.entry_error;
    j["unitarity_defect"] = r.unitarity_defect;
    j["ledger_defect"] = ledger_defect(r);
    j["transfer_O"] = r.transfer_O;
    j["transfer_dw_min"] = r.transfer_dw_min;
    j["warnings"] = r.warnings;
    j["failed"] = r.failed;
    return j;
}

/// Edge list: one bond per line, "a b amplitude parity_a parity_b kind".
inline std::string lattice_edge_list(const Lattice2D& lat, const std::vector<double>* amplitudes = nullptr) {
    std::ostringstream out;
    out << "# rows " << lat.rows << " cols " << lat.cols << " geometry " << to_string(lat.geometry) << " nodes "
        << lat.size() << "\n";
    out << "# terminals";
    for (const auto& t : lat.terminals) out << ' ' << t.qubit << '=' << t.node;
    out << "\n# a b amplitude parity_a parity_b kind\n";
    for (std::size_t k = 0; k < lat.bonds.size(); ++k) {
        const auto& b = lat.bonds[k];
        const double a = amplitudes ? (*amplitudes)[k] : b.amplitude;
        out << b.a << ' ' << b.b << ' ' << fmt(a) << ' ' << (lat.nodes[b.a].parity ? "odd" : "even") << ' '
            << (lat.nodes[b.b].parity ? "odd" : "even") << ' ' << to_string(b.kind) << "\n";
    }
    return out.str();
}

struct EdgeListEntry {
    int a = 0, b = 0;
    double amplitude = 0.0;
    std::string parity_a, parity_b, kind;
};

inline std::vector<EdgeListEntry> parse_edge_list(const std::string& text) {
    std::vector<EdgeListEntry> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream r(line);
        EdgeListEntry e;
        std::string amp;
        if (!(r >> e.a >> e.b >> amp >> e.parity_a >> e.parity_b >> e.kind))
            throw ConfigError("edge list: malformed line '" + line + "'");
        e.amplitude = std::stod(amp);
        out.push_back(e);
    }
    return out;
}

inline Json obstruction_json(const ObstructionReport& r) {
    Json j;
    j["terminal_a"] = r.terminal_a;
    j["terminal_b"] = r.terminal_b;
    j["parity"] = to_string(r.parity);
    j["bipartite"] = r.bipartite;
    j["max_O"] = r.max_O;
    j["threshold"] = r.threshold;
    j["obstruction_holds"] = r.obstruction_holds();
    j["protected_zero_modes"] = r.protected_zero_modes;
    j["zero_mode_splitting"] = r.zero_mode_splitting;
    j["scope"] = r.scope;
    return j;
}

}  // namespace topnet
