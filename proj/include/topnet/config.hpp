// Plain-text key = value configuration files and NetworkSpec / matrix text formats.
//
//   # comment
//   schema_version = 1
//   model = bSSH
//   w = 0.5, 0.5, 0.5
//
// Keys are unique; list values are comma separated. Every key must be consumed by the
// reader, so a misspelt key is reported instead of silently ignored.
#pragma once

#include "topnet/network.hpp"
#include "topnet/pulse.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace topnet {

inline constexpr int kSchemaVersion = 1;

class ConfigError : public SpecError {
public:
    using SpecError::SpecError;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

/// Shortest text that parses back to exactly the same double.
inline std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace detail

class Config {
public:
    Config() = default;

    static Config parse(std::istream& in, const std::string& source = "<config>") {
        Config c;
        c.source_ = source;
        std::string line;
        int n = 0;
        while (std::getline(in, line)) {
            ++n;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(source + ":" + std::to_string(n) + ": expected 'key = value', got '" + line + "'");
            const std::string key = detail::trim(line.substr(0, eq));
            if (key.empty()) throw ConfigError(source + ":" + std::to_string(n) + ": empty key");
            if (c.values_.count(key))
                throw ConfigError(source + ":" + std::to_string(n) + ": duplicate key '" + key + "' (first on line " +
                                  std::to_string(c.lines_[key]) + ")");
            c.values_[key] = detail::trim(line.substr(eq + 1));
            c.lines_[key] = n;
        }
        return c;
    }

    static Config parse_string(const std::string& text, const std::string& source = "<string>") {
        std::istringstream in(text);
        return parse(in, source);
    }

    static Config load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        return parse(in, path);
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    void set(const std::string& key, const std::string& value) {
        values_[key] = value;
        lines_.emplace(key, 0);
    }

    std::string get_string(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError(source_ + ": missing required key '" + key + "'");
        used_.insert(key);
        resolved_[key] = it->second;
        return it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        if (has(key)) return get_string(key);
        resolved_[key] = fallback;
        return fallback;
    }

    double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
    double get_double(const std::string& key, double fallback) const {
        if (has(key)) return get_double(key);
        resolved_[key] = detail::format_double(fallback);
        return fallback;
    }

    long long get_int(const std::string& key) const {
        const std::string v = get_string(key);
        std::size_t pos = 0;
        long long out = 0;
        try {
            out = std::stoll(v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != v.size() || v.empty()) throw error(key, "expected an integer, got '" + v + "'");
        return out;
    }
    long long get_int(const std::string& key, long long fallback) const {
        if (has(key)) return get_int(key);
        resolved_[key] = std::to_string(fallback);
        return fallback;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        if (!has(key)) {
            resolved_[key] = fallback ? "true" : "false";
            return fallback;
        }
        const std::string v = get_string(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw error(key, "expected a boolean, got '" + v + "'");
    }

    std::vector<double> get_doubles(const std::string& key) const {
        std::vector<double> out;
        const std::string v = get_string(key);
        if (v.empty()) return out;
        for (const auto& item : detail::split(v, ',')) out.push_back(to_double(key, item));
        return out;
    }
    std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const {
        if (has(key)) return get_doubles(key);
        std::string text;
        for (std::size_t k = 0; k < fallback.size(); ++k) text += (k ? ", " : "") + detail::format_double(fallback[k]);
        resolved_[key] = text;
        return fallback;
    }

    std::vector<int> get_ints(const std::string& key) const {
        std::vector<int> out;
        for (double d : get_doubles(key)) {
            if (d != std::floor(d)) throw error(key, "expected integers");
            out.push_back(static_cast<int>(d));
        }
        return out;
    }

    /// Checks schema_version and rejects keys nobody read.
    void require_schema() const {
        const long long v = get_int("schema_version");
        if (v != kSchemaVersion)
            throw error("schema_version", "unsupported version " + std::to_string(v) + " (expected " +
                                              std::to_string(kSchemaVersion) + ")");
    }

    void check_unused() const {
        std::string bad;
        for (const auto& [k, v] : values_)
            if (!used_.count(k)) bad += " '" + k + "' (line " + std::to_string(lines_.at(k)) + ")";
        if (!bad.empty()) throw ConfigError(source_ + ": unknown keys:" + bad);
    }

    const std::map<std::string, std::string>& values() const { return values_; }
    /// Every key read so far with the value actually used, defaults included.
    const std::map<std::string, std::string>& resolved() const { return resolved_; }
    const std::string& source() const { return source_; }

    std::string serialize() const {
        std::string out;
        for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
        return out;
    }

    ConfigError error(const std::string& key, const std::string& what) const {
        const auto it = lines_.find(key);
        const std::string where = it != lines_.end() && it->second > 0 ? ":" + std::to_string(it->second) : "";
        return ConfigError(source_ + where + ": key '" + key + "': " + what);
    }

private:
    double to_double(const std::string& key, const std::string& v) const {
        std::size_t pos = 0;
        double out = 0.0;
        try {
            out = std::stod(v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != v.size() || v.empty()) throw error(key, "expected a number, got '" + v + "'");
        return out;
    }

    std::string source_ = "<config>";
    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;
    mutable std::set<std::string> used_;
    mutable std::map<std::string, std::string> resolved_;
};

inline std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + detail::format_double(v[k]);
    return out;
}

// ---------------------------------------------------------------------------
// NetworkSpec
// ---------------------------------------------------------------------------

inline std::string write_network_spec(const NetworkSpec& s) {
    std::ostringstream out;
    out << "schema_version = " << kSchemaVersion << "\n";
    out << "model = " << to_string(s.kind) << "\n";
    out << "L = " << s.L << "\n";
    out << "w = " << join_doubles(s.w) << "\n";
    out << "t = " << join_doubles(s.t) << "\n";
    out << "delta = " << detail::format_double(s.delta) << "\n";
    out << "omega = " << join_doubles(s.omega) << "\n";
    if (s.kind == ModelKind::bBarrier) {
        out << "omega_edge = " << detail::format_double(s.omega_edge) << "\n";
        out << "omega_barrier = " << detail::format_double(s.omega_barrier) << "\n";
    }
    return out.str();
}

/// Reads the NetworkSpec keys of a config. Scalar shorthands `wbar` / `tbar` fill uniform
/// vectors when the explicit lists are absent.
inline NetworkSpec read_network_spec(const Config& c) {
    NetworkSpec s;
    s.kind = model_kind_from_string(c.get_string("model"));
    const long long L = c.get_int("L");
    if (L < 1) throw c.error("L", "must be a positive integer");
    s.L = static_cast<int>(L);
    s.delta = c.get_double("delta", 0.0);
    const double tbar = c.get_double("tbar", 1.0);
    const double wbar = c.get_double("wbar", 0.0);
    s.w = c.has("w") ? c.get_doubles("w") : std::vector<double>(s.L, wbar);
    s.t = c.has("t") ? c.get_doubles("t") : std::vector<double>(s.L - 1, tbar);
    s.omega = c.has("omega") ? c.get_doubles("omega") : std::vector<double>(2 * s.L, s.delta);
    if (s.kind == ModelKind::bBarrier) {
        s.omega_edge = c.get_double("omega_edge");
        s.omega_barrier = c.get_double("omega_barrier");
        if (!c.has("omega")) {
            std::fill(s.omega.begin(), s.omega.end(), s.omega_barrier);
            s.omega.front() = s.omega.back() = s.omega_edge;
        }
    }
    try {
        s.validate();
    } catch (const SpecError& e) {
        throw ConfigError(c.source() + ": " + e.what());
    }
    return s;
}

// ---------------------------------------------------------------------------
// Pulse
// ---------------------------------------------------------------------------

/// pulse = sine_squared | smoothed | tabulated, with pulse_order (smoothed) or
/// pulse_s / pulse_p sample lists (tabulated).
inline Pulse read_pulse(const Config& c) {
    const std::string kind = c.get_string("pulse", "sine_squared");
    try {
        if (kind == "sine_squared") return Pulse::sine_squared();
        if (kind == "smoothed") return Pulse::smoothed(static_cast<int>(c.get_int("pulse_order")));
        if (kind == "tabulated") return Pulse::tabulated(c.get_doubles("pulse_s"), c.get_doubles("pulse_p"));
    } catch (const ConfigError&) {
        throw;
    } catch (const SpecError& e) {
        throw c.error("pulse", e.what());
    }
    throw c.error("pulse", "unknown pulse family '" + kind + "'");
}

inline std::string write_pulse(const Pulse& p) {
    switch (p.family()) {
        case PulseFamily::sine_squared: return "pulse = sine_squared\n";
        case PulseFamily::smoothed: return "pulse = smoothed\npulse_order = " + std::to_string(p.order()) + "\n";
        case PulseFamily::tabulated:
            return "pulse = tabulated\npulse_s = " + join_doubles(p.samples_s()) + "\npulse_p = " +
                   join_doubles(p.samples_p()) + "\n";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Dense matrix text
// ---------------------------------------------------------------------------

/// Row-major, one row per line, `#` header carrying the basis labels.
inline std::string write_matrix_text(const CouplingMatrix& m) {
    std::ostringstream out;
    out << "# model " << to_string(m.kind) << " L " << m.L << " dim " << m.dim() << "\n";
    out << "# labels";
    for (const auto& l : m.basis_labels) out << ' ' << l;
    out << "\n";
    for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.entries.cols(); ++j)
            out << (j ? " " : "") << detail::format_double(m.entries(i, j));
        out << "\n";
    }
    return out.str();
}

struct MatrixText {
    std::vector<std::string> labels;
    RealMatrix entries;
};

inline MatrixText read_matrix_text(std::istream& in) {
    MatrixText m;
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream h(line.substr(1));
            std::string word;
            h >> word;
            if (word == "labels")
                while (h >> word) m.labels.push_back(word);
            continue;
        }
        std::istringstream r(line);
        std::vector<double> row;
        double v;
        while (r >> v) row.push_back(v);
        if (!r.eof()) throw ConfigError("matrix text: unparsable row '" + line + "'");
        rows.push_back(std::move(row));
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    m.entries.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != n) throw ConfigError("matrix text: matrix is not square");
        for (Eigen::Index j = 0; j < n; ++j) m.entries(i, j) = rows[i][j];
    }
    if (!m.labels.empty() && static_cast<Eigen::Index>(m.labels.size()) != n)
        throw ConfigError("matrix text: label count does not match dimension");
    return m;
}

}  // namespace topnet
