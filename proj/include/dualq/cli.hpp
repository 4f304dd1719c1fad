#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "json_io.hpp"

namespace dualq::cli {

enum ExitCode { Ok = 0, InputError = 2, DimensionError = 3, Negative = 4, InvariantFailure = 5 };

inline int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Input: return InputError;
        case ErrorKind::Dimension: return DimensionError;
        case ErrorKind::Refusal: return Negative;
        case ErrorKind::Invariant: return InvariantFailure;
    }
    return InvariantFailure;
}

struct Result {
    int code = Ok;
    std::string out;  // stdout payload
};

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline std::pair<StarBody, StarBody> load_pair(const std::string& kf, const std::string& lf, const GridSet& grids) {
    StarBody k = body_from_json(read_json_file(kf), &grids), l = body_from_json(read_json_file(lf), &grids);
    require_same_dim(k.dim(), l.dim(), "body pair");
    return {k, l};
}

// ---------------------------------------------------------------------------

inline Result cmd_compute(const std::string& kf, const std::string& lf, std::vector<double> indices,
                          const RunConfig& cfg, std::ostream& log) {
    const GridSet grids = cfg.grids();
    auto [k, l] = load_pair(kf, lf, grids);
    const int n = k.dim();
    if (indices.empty())
        for (int i = 0; i <= n; ++i) indices.push_back(i);
    if (std::find(indices.begin(), indices.end(), 0.0) == indices.end()) {
        log << "compute: adding index 0 (tuples are normalized by W_0)\n";
        indices.push_back(0.0);
    }
    const auto grid = grids.get(n);
    log << "compute: n=" << n << ", " << grid->size() << " nodes\n";
    return {Ok, dump(to_json(quermass_tuple(k, l, indices, *grid)))};
}

inline Result cmd_check(const std::string& tf, const RunConfig& cfg, std::ostream& log) {
    const QuermassTuple t = tuple_from_json(read_json_file(tf));
    const ConeVerdict v = interval_search(t, cfg.synth().moment);
    log << "check: " << to_string(v.status) << '\n';
    const bool ok = v.status == ConeStatus::Interior || v.status == ConeStatus::GeometricRay;
    return {ok ? Ok : Negative, dump(to_json(v))};
}

// Writes <out>K.json and <out>L.json (out defaults to "witness_").
inline Result cmd_realize(const std::string& tf, const RunConfig& cfg, std::ostream& log) {
    const QuermassTuple t = tuple_from_json(read_json_file(tf));
    const GridSet grids = cfg.grids();
    const auto grid = grids.get(t.dim);
    Realization r;
    try {
        r = realize_pair(t, t.dim, grid.get(), cfg.synth());
    } catch (const RefusalError& e) {
        log << e.what() << '\n';
        return {Negative, dump(to_json(e.verdict()))};
    }
    const std::string prefix = cfg.out.empty() ? std::string("witness_") : cfg.out;
    const std::string kf = prefix + "K.json", lf = prefix + "L.json";
    write_json_file(kf, to_json(r.k));
    write_json_file(lf, to_json(r.l));
    log << "realize: wrote " << kf << " and " << lf << '\n';

    const QuermassTuple back = quermass_tuple(r.k, r.l, t.indices, *grid);
    Json j;
    j["verdict"] = to_json(r.verdict);
    if (r.measure) j["measure"] = to_json(*r.measure);
    j["files"] = {kf, lf};
    j["tuple"] = to_json(back);
    j["max_rel_dev"] = num(r.max_rel_dev);
    j["within_tol"] = r.max_rel_dev <= cfg.quad_tol;
    return {r.max_rel_dev <= cfg.quad_tol ? Ok : InvariantFailure, dump(j)};
}

inline Json roots_json(const DualSteinerPoly& p, double residual_tol) {
    const RootSet rs = roots(p);
    const StabilityReport st = stability_check(p);
    Json j;
    j["poly"] = to_json(p);
    const Json r = to_json(rs);
    j["roots"] = r["roots"];
    j["residual"] = r["residual"];
    j["residual_ok"] = rs.residual <= residual_tol;
    j["vieta_deviation"] = num(vieta_deviation(p, rs));
    j["stability"] = to_string(st.routh);
    j["max_real"] = num(st.max_real);
    return j;
}

// Either a body pair or a single tuple file with indices 0..n.
inline Result cmd_roots(const std::vector<std::string>& files, const RunConfig& cfg, std::ostream& log) {
    DualSteinerPoly p;
    if (files.size() == 1) {
        p = build_poly_from_tuple(tuple_from_json(read_json_file(files[0])));
    } else if (files.size() == 2) {
        const GridSet grids = cfg.grids();
        auto [k, l] = load_pair(files[0], files[1], grids);
        p = build_poly(k, l, *grids.get(k.dim()));
    } else {
        fail_input("roots: expects a tuple file or two body files");
    }
    Json j = roots_json(p, cfg.root_residual);
    log << "roots: degree " << p.dim << ", residual " << j["residual"].get<double>() << '\n';
    return {j["residual_ok"].get<bool>() ? Ok : InvariantFailure, dump(j)};
}

// CSV theta,status,witness_id. Witnesses of IN rows go to <out>/witness_<id>.json
// when an output directory is configured.
inline Result cmd_cone(int n, int samples, const RunConfig& cfg, std::ostream& log) {
    if (n < 2) fail_input("cone: dimension must be >= 2");
    const GridSet grids = cfg.grids();
    const auto map = cone_boundary_map(n, samples, *grids.get(n), cfg.search());
    if (!cfg.out.empty()) std::filesystem::create_directories(cfg.out);

    std::ostringstream csv;
    Json rows = Json::array();
    csv << "theta,status,witness_id\n";
    int next_id = 0;
    for (const auto& e : map) {
        std::string id;
        if (e.query.status == Membership::In && e.query.witness) {
            id = std::to_string(next_id++);
            if (!cfg.out.empty()) {
                const ConeWitness& w = *e.query.witness;
                Json wj = {{"id", id}, {"dim", n}, {"theta", num(e.theta)}, {"root", complex_json(e.query.z)},
                           {"tuple", num_array(w.tuple)}, {"residual", num(w.residual)}};
                if (w.pair) {
                    wj["k"] = to_json(w.pair->first);
                    wj["l"] = to_json(w.pair->second);
                }
                write_json_file((std::filesystem::path(cfg.out) / ("witness_" + id + ".json")).string(), wj);
            }
        }
        char th[32];
        std::snprintf(th, sizeof th, "%.15g", e.theta);
        csv << th << ',' << to_string(e.query.status) << ',' << id << '\n';
        Json row = {{"theta", num(e.theta)}, {"status", to_string(e.query.status)}, {"witness_id", id}};
        if (!e.query.certificate.empty()) row["certificate"] = e.query.certificate;
        rows.push_back(row);
    }
    log << "cone: n=" << n << ", " << samples << " angles, " << next_id << " witnesses\n";
    return {Ok, cfg.format == "csv" ? csv.str() : dump(rows)};
}

// Inequality suites for one pair. Any hard failure gives exit code 5.
inline Result cmd_verify(const std::string& kf, const std::string& lf, const RunConfig& cfg, std::ostream& log) {
    const GridSet grids = cfg.grids();
    auto [k, l] = load_pair(kf, lf, grids);
    const int n = k.dim();
    const auto grid = grids.get(n);
    PairQuadrature q(k, l, *grid);
    const bool dilate = q.range().dilate;
    std::vector<double> idx, w;
    for (int i = 0; i <= std::max(4, n); ++i) {
        idx.push_back(i);
        w.push_back(q(i));
    }
    const QuermassTuple t = make_tuple(n, idx, w);
    bool pass = true;
    Json j;
    j["dim"] = n;
    j["dilate"] = dilate;
    j["tuple"] = to_json(t);

    Json af = Json::array();
    for (std::size_t i = 0; i + 2 < idx.size(); ++i) {
        for (std::size_t d = 1; i + 2 * d < idx.size(); ++d) {
            const auto r = dual_af_verify(t, idx[i], idx[i + d], idx[i + 2 * d]);
            // strict off the dilate locus, equality on it
            const bool ok = dilate ? r.equality : (r.holds && r.slack > 0.0);
            pass = pass && ok;
            af.push_back({{"indices", {idx[i], idx[i + d], idx[i + 2 * d]}}, {"slack", num(r.slack)}, {"pass", ok}});
        }
    }
    j["dual_af"] = af;

    Json mono;
    try {
        bool ok = true;
        for (int i = 0; i < n; ++i) ok = ok && monotonicity_verify(k, l, *grid, i, i + 1);
        mono = {{"applicable", true}, {"pass", ok}};
        pass = pass && ok;
    } catch (const ContainmentError&) {
        mono = {{"applicable", false}};
    }
    j["monotonicity"] = mono;

    Json hk = Json::array();
    for (int m = 1; 2 * m < static_cast<int>(w.size()); ++m) {
        const auto r = hankel_report(w, m, dilate, cfg.pd_rel);
        pass = pass && r.pass;
        hk.push_back({{"m", m},
                      {"a_min_eig", num(r.a_min_eig)},
                      {"b_min_eig", num(r.b_min_eig)},
                      {"a_det", num(r.a_det)},
                      {"b_det", num(r.b_det)},
                      {"mode", dilate ? "psd" : "pd"},
                      {"pass", r.pass}});
    }
    j["hankel"] = hk;

    const DualSteinerPoly p = build_poly(k, l, *grid), pr = build_poly(l, k, *grid);
    const RootSet rs = roots(p);
    const double vd = vieta_deviation(p, rs), rd = reciprocity_deviation(p, pr, cfg.seed);
    const bool vok = vd <= 1e-8 && rs.residual <= cfg.root_residual, rok = rd <= 1e-10;
    pass = pass && vok && rok;
    j["vieta"] = {{"deviation", num(vd)}, {"residual", num(rs.residual)}, {"pass", vok}};
    j["reciprocity"] = {{"deviation", num(rd)}, {"pass", rok}};
    j["pass"] = pass;
    log << "verify: " << (pass ? "all suites pass" : "failures present") << '\n';
    return {pass ? Ok : InvariantFailure, dump(j)};
}

}  // namespace dualq::cli
