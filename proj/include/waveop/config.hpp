#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "waveop/grids.hpp"
#include "waveop/potential.hpp"

namespace waveop {

inline constexpr const char* tool_version = "1.0.0";

/// Everything a run needs, read from a flat `section.key = value` file.
/// Runs are seedless and fully deterministic.
struct ExperimentConfig {
    // potential
    std::string family = "cosine";
    double pot_c = 0.5;
    double pot_x0 = 6.0;
    double pot_w = 4.0;
    double pot_alpha = 0.75;
    double pot_omega = 2.0;
    double pot_v0 = 1.0;
    double pot_len = 4.0;
    // packet
    double a = 0.8;
    double b = 1.6;
    // grids
    double x_max = 1600.0;
    std::size_t n = 131072;
    double k_min = 0.05;
    double k_max = 4.0;
    std::size_t m = 512;
    // theorem harness
    std::vector<double> t_list{25.0, 50.0, 100.0, 200.0};
    std::size_t nodes_per_horizon = 128;
    // finite-difference oracle
    double fd_dt = 0.005;
    double fd_t_compare = 10.0;
    // diagnostics
    std::vector<double> diag_t_list{25.0, 50.0, 100.0, 200.0};
    double delta = 0.0;  // 0 = default (a/2)^2
    bool svg = true;

    double delta_effective() const { return delta > 0.0 ? delta : 0.25 * a * a; }

    Potential make_potential() const {
        const RadialGrid g(x_max, n);
        if (family == "zero") return Potential::zero(g);
        if (family == "bump") return Potential::bump(g, pot_c, pot_x0, pot_w);
        if (family == "cosine") return Potential::cosine(g, pot_c, pot_alpha, pot_omega);
        if (family == "well") return Potential::well(g, pot_v0, pot_len);
        throw std::invalid_argument("unknown potential family '" + family + "'");
    }

    /// Violated invariants, each stated as the failed inequality; empty when valid.
    std::vector<std::string> violations() const {
        std::vector<std::string> v;
        auto fail = [&](const std::string& s) { v.push_back(s); };
        if (!(x_max > 0.0)) fail("grid.x_max > 0");
        if (n < 2) fail("grid.n >= 2");
        if (!(a > 0.0)) fail("packet.a > 0");
        if (!(b > a)) fail("packet.b > packet.a");
        if (!(k_min > 0.0)) fail("kgrid.k_min > 0");
        if (!(k_max > k_min)) fail("kgrid.k_max > kgrid.k_min");
        if (m < 2) fail("kgrid.m >= 2");
        if (family != "zero" && family != "bump" && family != "cosine" && family != "well")
            fail("potential.family in {zero, bump, cosine, well}");
        if (t_list.empty()) fail("theorem.t_list nonempty");
        double t_max = 0.0;
        for (double t : t_list) {
            if (!(t > 0.0)) fail("theorem.t_list entries > 0");
            t_max = std::max(t_max, t);
        }
        if (!(2.0 * b * t_max <= x_max)) {
            std::ostringstream os;
            os << "ballistic fit 2*b*max(T) <= x_max violated: 2*" << b << "*" << t_max << " = "
               << 2.0 * b * t_max << " > " << x_max;
            fail(os.str());
        }
        if (!(k_min <= 0.5 * a)) {
            std::ostringstream os;
            os << "k-grid must cover [a/2, 2b]: k_min = " << k_min << " > a/2 = " << 0.5 * a;
            fail(os.str());
        }
        if (!(k_max >= 2.0 * b)) {
            std::ostringstream os;
            os << "k-grid must cover [a/2, 2b]: k_max = " << k_max << " < 2b = " << 2.0 * b;
            fail(os.str());
        }
        if (!(fd_dt > 0.0)) fail("fd.dt > 0");
        if (nodes_per_horizon < 2 || nodes_per_horizon % 2 != 0)
            fail("theorem.nodes_per_horizon even and >= 2");
        return v;
    }

    /// Canonical key=value text; basis of the config hash and of the copy
    /// embedded in every artifact directory.
    std::string canonical_text() const;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += format_double(v[i]);
    }
    return s;
}

}  // namespace detail

inline std::string ExperimentConfig::canonical_text() const {
    std::map<std::string, std::string> kv;
    kv["potential.family"] = family;
    kv["potential.c"] = detail::format_double(pot_c);
    kv["potential.x0"] = detail::format_double(pot_x0);
    kv["potential.w"] = detail::format_double(pot_w);
    kv["potential.alpha"] = detail::format_double(pot_alpha);
    kv["potential.omega"] = detail::format_double(pot_omega);
    kv["potential.v0"] = detail::format_double(pot_v0);
    kv["potential.len"] = detail::format_double(pot_len);
    kv["packet.a"] = detail::format_double(a);
    kv["packet.b"] = detail::format_double(b);
    kv["grid.x_max"] = detail::format_double(x_max);
    kv["grid.n"] = std::to_string(n);
    kv["kgrid.k_min"] = detail::format_double(k_min);
    kv["kgrid.k_max"] = detail::format_double(k_max);
    kv["kgrid.m"] = std::to_string(m);
    kv["theorem.t_list"] = detail::format_list(t_list);
    kv["theorem.nodes_per_horizon"] = std::to_string(nodes_per_horizon);
    kv["fd.dt"] = detail::format_double(fd_dt);
    kv["fd.t_compare"] = detail::format_double(fd_t_compare);
    kv["diagnostics.t_list"] = detail::format_list(diag_t_list);
    kv["diagnostics.delta"] = detail::format_double(delta);
    kv["output.svg"] = svg ? "true" : "false";
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

/// FNV-1a 64-bit over the canonical text, as a fixed-width hex string.
inline std::string config_hash(const ExperimentConfig& cfg) {
    const std::string text = cfg.canonical_text();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument("");
        } catch (...) {
            throw std::invalid_argument("config: bad number '" + item + "' in " + key);
        }
    }
    return out;
}

inline double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: bad number '" + s + "' for " + key);
    }
}

inline std::size_t parse_size(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size() || v < 0) throw std::invalid_argument("");
        return static_cast<std::size_t>(v);
    } catch (...) {
        throw std::invalid_argument("config: bad count '" + s + "' for " + key);
    }
}

}  // namespace detail

/// Grammar: one `section.key = value` per line; `#` starts a comment;
/// lists are comma separated.  Unknown keys are rejected.
inline ExperimentConfig parse_config_text(const std::string& text,
                                          ExperimentConfig base = ExperimentConfig{}) {
    ExperimentConfig cfg = base;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key == "potential.family") cfg.family = val;
        else if (key == "potential.c") cfg.pot_c = detail::parse_double(val, key);
        else if (key == "potential.x0") cfg.pot_x0 = detail::parse_double(val, key);
        else if (key == "potential.w") cfg.pot_w = detail::parse_double(val, key);
        else if (key == "potential.alpha") cfg.pot_alpha = detail::parse_double(val, key);
        else if (key == "potential.omega") cfg.pot_omega = detail::parse_double(val, key);
        else if (key == "potential.v0") cfg.pot_v0 = detail::parse_double(val, key);
        else if (key == "potential.len") cfg.pot_len = detail::parse_double(val, key);
        else if (key == "packet.a") cfg.a = detail::parse_double(val, key);
        else if (key == "packet.b") cfg.b = detail::parse_double(val, key);
        else if (key == "grid.x_max") cfg.x_max = detail::parse_double(val, key);
        else if (key == "grid.n") cfg.n = detail::parse_size(val, key);
        else if (key == "kgrid.k_min") cfg.k_min = detail::parse_double(val, key);
        else if (key == "kgrid.k_max") cfg.k_max = detail::parse_double(val, key);
        else if (key == "kgrid.m") cfg.m = detail::parse_size(val, key);
        else if (key == "theorem.t_list") cfg.t_list = detail::parse_list(val, key);
        else if (key == "theorem.nodes_per_horizon") cfg.nodes_per_horizon = detail::parse_size(val, key);
        else if (key == "fd.dt") cfg.fd_dt = detail::parse_double(val, key);
        else if (key == "fd.t_compare") cfg.fd_t_compare = detail::parse_double(val, key);
        else if (key == "diagnostics.t_list") cfg.diag_t_list = detail::parse_list(val, key);
        else if (key == "diagnostics.delta") cfg.delta = detail::parse_double(val, key);
        else if (key == "output.svg") {
            if (val == "true") cfg.svg = true;
            else if (val == "false") cfg.svg = false;
            else throw std::invalid_argument("config: output.svg must be true or false");
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path,
                                    ExperimentConfig base = ExperimentConfig{}) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), base);
}

/// Named presets.  "default" is the desk-scale configuration; "quick"
/// shrinks every grid for smoke runs.
inline ExperimentConfig preset_config(const std::string& name) {
    if (name == "default") return ExperimentConfig{};
    if (name == "quick") {
        ExperimentConfig cfg;
        cfg.x_max = 400.0;
        cfg.n = 32768;
        cfg.m = 256;
        cfg.t_list = {12.5, 25.0, 50.0};
        cfg.diag_t_list = {12.5, 25.0, 50.0};
        cfg.nodes_per_horizon = 64;
        cfg.fd_dt = 0.01;
        return cfg;
    }
    throw std::invalid_argument("unknown preset '" + name + "' (available: default, quick)");
}

}  // namespace waveop
