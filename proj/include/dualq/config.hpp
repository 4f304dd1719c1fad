#pragma once

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>

#include "errors.hpp"
#include "root_cone.hpp"
#include "sphere_grid.hpp"
#include "synth.hpp"

namespace dualq {

struct RunConfig {
    std::map<int, int> res;     // per-dimension grid resolution
    std::optional<int> res_all; // overrides every dimension
    double quad_tol = 1e-6;     // round-trip and quadrature comparisons
    double pd_rel = 1e-10;      // relative PD threshold for Hankel matrices
    double root_residual = 1e-10;
    int kmax = 20;
    int lp_nodes = 2001;
    double margin_tol = 1e-9;
    int multistarts = 16;
    int evals_per_start = 400;
    int samples = 180;          // cone map angles
    std::uint64_t seed = 1;
    std::string format = "json";
    std::string out;

    GridSet grids() const {
        GridSet g(res);
        if (res_all)
            for (int n = 1; n <= 12; ++n) g.set_resolution(n, *res_all);
        return g;
    }

    SynthSettings synth() const {
        SynthSettings s;
        s.moment.kmax = kmax;
        s.moment.nodes = lp_nodes;
        s.moment.margin_tol = margin_tol;
        return s;
    }

    SearchSettings search() const {
        SearchSettings s;
        s.multistarts = multistarts;
        s.evals_per_start = evals_per_start;
        s.seed = seed;
        s.synth = synth();
        return s;
    }
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
        fail_input("config: '" + key + "' expects a number, got '" + v + "'");
    return x;
}

inline long long parse_int(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    if (x != std::floor(x) || std::abs(x) > 9.0e15) fail_input("config: '" + key + "' expects an integer, got '" + v + "'");
    return static_cast<long long>(x);
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline double positive(const std::string& key, double x) {
    if (!(x > 0.0)) fail_input("config: '" + key + "' must be positive");
    return x;
}

}  // namespace detail

inline void set_option(RunConfig& c, const std::string& key, const std::string& value) {
    using detail::parse_double, detail::parse_int, detail::positive;
    auto pos_int = [&](long long lo) {
        const long long x = parse_int(key, value);
        if (x < lo) fail_input("config: '" + key + "' must be >= " + std::to_string(lo));
        return static_cast<int>(x);
    };
    if (key == "res") {
        c.res_all = pos_int(1);
    } else if (key.rfind("res.", 0) == 0) {
        const long long n = parse_int(key, key.substr(4));
        if (n < 1 || n > 64) fail_input("config: bad dimension in '" + key + "'");
        c.res[static_cast<int>(n)] = pos_int(1);
    } else if (key == "quad_tol") {
        c.quad_tol = positive(key, parse_double(key, value));
    } else if (key == "pd_rel") {
        c.pd_rel = positive(key, parse_double(key, value));
    } else if (key == "root_residual") {
        c.root_residual = positive(key, parse_double(key, value));
    } else if (key == "margin_tol") {
        c.margin_tol = positive(key, parse_double(key, value));
    } else if (key == "kmax") {
        c.kmax = pos_int(1);
    } else if (key == "lp_nodes") {
        c.lp_nodes = pos_int(3);
    } else if (key == "multistarts") {
        c.multistarts = pos_int(1);
    } else if (key == "evals_per_start") {
        c.evals_per_start = pos_int(1);
    } else if (key == "samples") {
        c.samples = pos_int(1);
    } else if (key == "seed") {
        const long long s = parse_int(key, value);
        if (s < 0) fail_input("config: 'seed' must be non-negative");
        c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "format") {
        if (value != "json" && value != "csv") fail_input("config: 'format' must be json or csv");
        c.format = value;
    } else if (key == "out") {
        c.out = value;
    } else {
        fail_input("config: unknown key '" + key + "'");
    }
}

// key = value lines; '#' starts a comment.
inline void read_config(RunConfig& c, std::istream& in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail_input("config line " + std::to_string(lineno) + ": expected key=value");
        set_option(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
}

inline void read_config_file(RunConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_input("cannot open config '" + path + "'");
    read_config(c, in);
}

}  // namespace dualq
