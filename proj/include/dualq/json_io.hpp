#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "moment.hpp"
#include "quermass.hpp"
#include "root_cone.hpp"
#include "star_body.hpp"
#include "steiner.hpp"
#include "synth.hpp"

namespace dualq {

using Json = nlohmann::ordered_json;

// Reported quantities carry 15 significant digits. Bodies keep full precision
// so that written witnesses reproduce their tuples exactly.
inline double round15(double x) {
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::strtod(buf, nullptr);
}

inline Json num(double x) { return round15(x); }

inline Json num_array(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

namespace detail {

template <class T>
T field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail_input(std::string("json: missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        fail_input(std::string("json: field '") + key + "' has the wrong type");
    }
}

inline const Json& object_field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_object())
        fail_input(std::string("json: missing object '") + key + "'");
    return j.at(key);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Star bodies

inline Json to_json(const StarBody& k) {
    struct V {
        int n;
        Json operator()(const body::Ball& b) const { return {{"dim", n}, {"kind", "ball"}, {"radius", b.radius}}; }
        Json operator()(const std::shared_ptr<const body::Dilate>& d) const {
            return {{"dim", n}, {"kind", "dilate"}, {"factor", d->factor}, {"base", to_json(d->base)}};
        }
        Json operator()(const body::Zonal& z) const {
            Json p = Json::array();
            for (std::size_t i = 0; i < z.profile->t().size(); ++i) p.push_back({z.profile->t()[i], z.profile->rho()[i]});
            return {{"dim", n}, {"kind", "zonal"}, {"profile", p}};
        }
        Json operator()(const body::Trig& t) const {
            return {{"dim", n}, {"kind", "trig"}, {"c0", t.c0}, {"cos", t.cos_coef}, {"sin", t.sin_coef}};
        }
        Json operator()(const body::GridTable& g) const {
            return {{"dim", n},
                    {"kind", "grid_table"},
                    {"grid", {{"dim", g.grid->dim()}, {"resolution", g.grid->resolution()}}},
                    {"interp", g.interp == TableInterp::Zonal ? "zonal" : "nearest"},
                    {"values", g.values}};
        }
        Json operator()(const std::shared_ptr<const body::RadialSum>& s) const {
            return {{"dim", n},          {"kind", "radial_sum"},     {"mu_left", s->mu_left},
                    {"mu_right", s->mu_right}, {"left", to_json(s->left)}, {"right", to_json(s->right)}};
        }
    };
    if (!k.valid()) fail_input("to_json: empty body");
    return std::visit(V{k.dim()}, k.node());
}

// Grid tables are rebuilt against a grid of the stored resolution; grids
// supplies it when the resolution matches, so repeated loads share storage.
inline StarBody body_from_json(const Json& j, const GridSet* grids = nullptr) {
    const int n = detail::field<int>(j, "dim");
    if (n < 1) fail_input("body: dimension must be >= 1");
    const auto kind = detail::field<std::string>(j, "kind");
    StarBody b;
    if (kind == "ball") {
        b = StarBody::ball(n, detail::field<double>(j, "radius"));
    } else if (kind == "dilate") {
        b = StarBody::dilate(body_from_json(detail::object_field(j, "base"), grids), detail::field<double>(j, "factor"));
    } else if (kind == "zonal") {
        const auto p = detail::field<std::vector<std::vector<double>>>(j, "profile");
        std::vector<double> t, rho;
        for (const auto& e : p) {
            if (e.size() != 2) fail_input("body: zonal profile entries must be [t, rho] pairs");
            t.push_back(e[0]);
            rho.push_back(e[1]);
        }
        b = StarBody::zonal(n, std::move(t), std::move(rho));
    } else if (kind == "trig") {
        if (n != 2) fail_dimension("body: trig bodies are planar");
        std::vector<double> c, s;
        if (j.contains("cos")) c = detail::field<std::vector<double>>(j, "cos");
        if (j.contains("sin")) s = detail::field<std::vector<double>>(j, "sin");
        b = StarBody::trig(detail::field<double>(j, "c0"), std::move(c), std::move(s));
    } else if (kind == "grid_table") {
        const Json& g = detail::object_field(j, "grid");
        const int gd = detail::field<int>(g, "dim"), res = detail::field<int>(g, "resolution");
        require_same_dim(gd, n, "body");
        if (res < 1) fail_input("body: grid resolution must be >= 1");
        std::shared_ptr<const SphereGrid> grid;
        if (grids && grids->resolution(n) == res)
            grid = grids->get(n);
        else
            grid = std::make_shared<const SphereGrid>(build_grid(n, res));
        const auto interp = j.contains("interp") ? detail::field<std::string>(j, "interp") : std::string("nearest");
        if (interp != "nearest" && interp != "zonal") fail_input("body: unknown interpolation '" + interp + "'");
        b = StarBody::grid_table(grid, detail::field<std::vector<double>>(j, "values"),
                                 interp == "zonal" ? TableInterp::Zonal : TableInterp::Nearest);
    } else if (kind == "radial_sum") {
        b = StarBody::radial_sum(body_from_json(detail::object_field(j, "left"), grids),
                                 body_from_json(detail::object_field(j, "right"), grids),
                                 detail::field<double>(j, "mu_left"), detail::field<double>(j, "mu_right"));
    } else {
        fail_input("body: unknown kind '" + kind + "'");
    }
    require_same_dim(b.dim(), n, "body");
    return b;
}

// ---------------------------------------------------------------------------
// Tuples, measures, verdicts

inline Json to_json(const QuermassTuple& t) {
    return {{"dim", t.dim}, {"indices", num_array(t.indices)}, {"values", num_array(t.values)}};
}

inline QuermassTuple tuple_from_json(const Json& j) {
    const int n = detail::field<int>(j, "dim");
    if (n < 1) fail_input("tuple: dimension must be >= 1");
    return make_tuple(n, detail::field<std::vector<double>>(j, "indices"), detail::field<std::vector<double>>(j, "values"));
}

inline Json to_json(const IntervalMeasure& mu) {
    Json atoms = Json::array();
    for (const auto& [t, w] : mu.atoms) atoms.push_back({num(t), num(w)});
    Json j = {{"interval", {num(mu.interval.a), num(mu.interval.b)}}, {"atoms", atoms}, {"floor", num(mu.floor)}};
    if (mu.spline)
        j["spline"] = {{"pieces", mu.spline->pieces},
                       {"log_interval", {num(mu.spline->s0), num(mu.spline->s1)}},
                       {"coeffs", num_array(mu.spline->coeffs)}};
    return j;
}

inline Json to_json(const ConeVerdict& v) {
    Json j = {{"status", to_string(v.status)}};
    j["interval"] = v.interval ? Json{num(v.interval->a), num(v.interval->b)} : Json(nullptr);
    if (v.density) {
        Json d = Json::array();
        for (const auto& [t, w] : v.density->atoms) d.push_back({num(t), num(w)});
        j["density"] = d;
        j["floor"] = num(v.density->floor);
    } else {
        j["density"] = nullptr;
    }
    j["lambda"] = v.lambda ? num(*v.lambda) : Json(nullptr);
    j["margin"] = num(v.margin);
    if (!v.certificate.empty()) j["certificate"] = v.certificate;
    return j;
}

// ---------------------------------------------------------------------------
// Polynomials and roots

inline Json to_json(const DualSteinerPoly& p) { return {{"dim", p.dim}, {"coeffs", num_array(p.coeffs)}}; }

inline Json complex_json(Complex z) { return {num(z.real()), num(z.imag())}; }

inline Json to_json(const RootSet& r) {
    Json a = Json::array();
    for (const Complex& z : r.roots) a.push_back(complex_json(z));
    return {{"roots", a}, {"residual", num(r.residual)}};
}

// ---------------------------------------------------------------------------
// Files

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_input("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        fail_input("'" + path + "': " + e.what());
    }
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) fail_input("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace dualq
