#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chain_model.hpp"
#include "closed_form.hpp"
#include "correlation.hpp"
#include "entropy.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "symbol_analysis.hpp"

namespace blockent::cli {

using json = nlohmann::json;

enum ExitCode : int { Ok = 0, SelfcheckFailed = 1, ConfigFailure = 2, NumericalFailure = 3 };

// Anything wrong with the configuration itself; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- CSV --------------------------------------------------------------------

inline std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}
    void header(const std::vector<std::string>& cols) { row(cols); }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }

private:
    std::ostream& os_;
};

// ---- config -----------------------------------------------------------------

struct RangeSpec {
    double min = 0.0, max = 0.0;
    int steps = 1;

    std::vector<double> values() const {
        std::vector<double> v;
        for (int i = 0; i < steps; ++i) v.push_back(steps == 1 ? min : min + (max - min) * i / (steps - 1));
        return v;
    }
};

struct ModelSpec {
    std::string type = "dm";
    DmParams dm;
    KitaevParams kitaev;
    CouplingSet raw;

    CouplingSet couplings() const {
        if (type == "dm") return build_dm(dm);
        if (type == "kitaev") return build_kitaev(kitaev);
        return raw;
    }
};

struct RunConfig {
    std::optional<ModelSpec> model;
    std::vector<double> alphas{1.0};
    std::vector<std::size_t> sizes;
    std::size_t fitMin = 0, fitMax = 0;
    double quadTol = 1e-10;
    // scans
    double scanS = 0.0;
    std::optional<RangeSpec> gamma, h, zeta;
    bool scanAnalytic = true;
    // oracle
    int oracleN = 8, oracleX = 2;
    // closed form
    std::string closedKind = "s1";
    double lambda = 1.5;
    std::size_t closedX = 200;
    std::uint64_t seed = 1;
    std::string out;
};

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) ok = true;
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

inline double num(const json& j, const char* key, double def) {
    if (!j.contains(key)) return def;
    if (!j[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return j[key].get<double>();
}

inline long long integer(const json& j, const char* key, long long def) {
    if (!j.contains(key)) return def;
    if (!j[key].is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
    return j[key].get<long long>();
}

inline cd complex_entry(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError("coupling entries must be numbers or [re, im] pairs");
}

inline RangeSpec range(const json& j, const std::string& where) {
    check_keys(j, {"min", "max", "steps"}, where);
    RangeSpec r;
    r.min = num(j, "min", 0.0);
    r.max = num(j, "max", r.min);
    r.steps = int(integer(j, "steps", 1));
    if (r.steps < 1) throw ConfigError(where + ".steps must be >= 1");
    if (r.max < r.min) throw ConfigError(where + " has max < min");
    return r;
}

inline ModelSpec model(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ConfigError("model needs a string 'type'");
    ModelSpec m;
    m.type = j["type"].get<std::string>();
    if (m.type == "dm") {
        check_keys(j, {"type", "t", "gamma", "s", "h"}, "model");
        m.dm = {num(j, "t", 1.0), num(j, "gamma", 0.0), num(j, "s", 0.0), num(j, "h", 0.0)};
    } else if (m.type == "kitaev") {
        check_keys(j, {"type", "h", "zeta", "analytic", "l_max"}, "model");
        m.kitaev.h = num(j, "h", 0.0);
        m.kitaev.zeta = num(j, "zeta", 1.0);
        if (j.contains("analytic")) {
            if (!j["analytic"].is_boolean()) throw ConfigError("'analytic' must be a boolean");
            m.kitaev.analytic = j["analytic"].get<bool>();
        }
        m.kitaev.l_max = int(integer(j, "l_max", 10000));
        if (!(m.kitaev.zeta > 0.0)) throw ConfigError("zeta must be positive");
        if (!m.kitaev.analytic && m.kitaev.l_max < 1) throw ConfigError("l_max must be >= 1");
    } else if (m.type == "raw") {
        check_keys(j, {"type", "A", "B"}, "model");
        if (!j.contains("A") || !j["A"].is_array() || j["A"].size() < 2)
            throw ConfigError("raw model needs A = [A_0, A_1, ...]");
        m.raw.A.clear();
        for (const auto& v : j["A"]) m.raw.A.push_back(complex_entry(v));
        m.raw.L = int(m.raw.A.size()) - 1;
        m.raw.B.assign(m.raw.A.size(), 0.0);
        if (j.contains("B")) {
            if (!j["B"].is_array() || j["B"].size() > std::size_t(m.raw.L))
                throw ConfigError("raw model B = [B_1, ..., B_L] has too many entries");
            for (std::size_t l = 0; l < j["B"].size(); ++l) m.raw.B[l + 1] = complex_entry(j["B"][l]);
        }
    } else {
        throw ConfigError("model type must be dm, kitaev or raw");
    }
    try {
        validate(m.couplings());
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid model: ") + e.what());
    }
    return m;
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
    using namespace detail;
    check_keys(j, {"model", "alphas", "sizes", "fit", "quad_tol", "scan", "oracle", "closed_form", "seed", "out"},
               "config");
    RunConfig c;
    if (j.contains("model")) c.model = model(j["model"]);
    if (j.contains("alphas")) {
        if (!j["alphas"].is_array() || j["alphas"].empty()) throw ConfigError("alphas must be a non-empty list");
        c.alphas.clear();
        for (const auto& a : j["alphas"]) {
            if (!a.is_number() || !(a.get<double>() > 0.0)) throw ConfigError("alphas must be positive numbers");
            c.alphas.push_back(a.get<double>());
        }
    }
    if (j.contains("sizes")) {
        const auto& s = j["sizes"];
        if (s.is_array()) {
            for (const auto& v : s) {
                if (!v.is_number_integer() || v.get<long long>() < 1) throw ConfigError("sizes must be positive integers");
                c.sizes.push_back(std::size_t(v.get<long long>()));
            }
        } else {
            check_keys(s, {"min", "max", "count"}, "sizes");
            long long lo = integer(s, "min", 0), hi = integer(s, "max", 0), n = integer(s, "count", 0);
            if (lo < 1 || hi < lo || n < 1) throw ConfigError("sizes needs 1 <= min <= max and count >= 1");
            c.sizes = geometric_sizes(std::size_t(lo), std::size_t(hi), std::size_t(n));
        }
        if (c.sizes.empty()) throw ConfigError("sizes is empty");
        for (std::size_t i = 1; i < c.sizes.size(); ++i)
            if (c.sizes[i] <= c.sizes[i - 1]) throw ConfigError("sizes must be strictly increasing");
    }
    if (j.contains("fit")) {
        check_keys(j["fit"], {"min", "max"}, "fit");
        c.fitMin = std::size_t(std::max(0LL, integer(j["fit"], "min", 0)));
        c.fitMax = std::size_t(std::max(0LL, integer(j["fit"], "max", 0)));
    }
    c.quadTol = num(j, "quad_tol", c.quadTol);
    if (!(c.quadTol > 0.0)) throw ConfigError("quad_tol must be positive");
    if (j.contains("scan")) {
        const auto& s = j["scan"];
        check_keys(s, {"s", "gamma", "h", "zeta", "analytic"}, "scan");
        c.scanS = num(s, "s", 0.0);
        if (s.contains("gamma")) c.gamma = range(s["gamma"], "scan.gamma");
        if (s.contains("h")) c.h = range(s["h"], "scan.h");
        if (s.contains("zeta")) c.zeta = range(s["zeta"], "scan.zeta");
        if (s.contains("analytic")) {
            if (!s["analytic"].is_boolean()) throw ConfigError("scan.analytic must be a boolean");
            c.scanAnalytic = s["analytic"].get<bool>();
        }
    }
    if (j.contains("oracle")) {
        check_keys(j["oracle"], {"N", "X"}, "oracle");
        c.oracleN = int(integer(j["oracle"], "N", c.oracleN));
        c.oracleX = int(integer(j["oracle"], "X", c.oracleX));
    }
    if (j.contains("closed_form")) {
        const auto& s = j["closed_form"];
        check_keys(s, {"kind", "X", "lambda"}, "closed_form");
        if (s.contains("kind")) {
            if (!s["kind"].is_string()) throw ConfigError("closed_form.kind must be a string");
            c.closedKind = s["kind"].get<std::string>();
        }
        long long x = integer(s, "X", 200);
        if (x < 1) throw ConfigError("closed_form.X must be >= 1");
        c.closedX = std::size_t(x);
        c.lambda = num(s, "lambda", c.lambda);
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("out")) {
        if (!j["out"].is_string()) throw ConfigError("out must be a string");
        c.out = j["out"].get<std::string>();
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    if (path.empty()) return RunConfig{};
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

// ---- shared pieces ------------------------------------------------------------

struct Options {
    RunConfig config;
    unsigned threads = 1;
    bool allowDegenerate = false;
};

inline const ModelSpec& need_model(const RunConfig& c) {
    if (!c.model) throw ConfigError("this command needs a 'model'");
    return *c.model;
}

inline const std::vector<std::size_t>& need_sizes(const RunConfig& c) {
    if (c.sizes.empty()) throw ConfigError("this command needs 'sizes'");
    return c.sizes;
}

inline double c_eff(const ArchetypeCount& ac) { return ac.N_T / 4.0; }

inline json describe(const ModelSpec& m) {
    json j;
    j["type"] = m.type;
    if (m.type == "dm") {
        j["t"] = m.dm.t;
        j["gamma"] = m.dm.gamma;
        j["s"] = m.dm.s;
        j["h"] = m.dm.h;
    } else if (m.type == "kitaev") {
        j["h"] = m.kitaev.h;
        j["zeta"] = m.kitaev.zeta;
        j["analytic"] = m.kitaev.analytic;
        if (!m.kitaev.analytic) j["l_max"] = m.kitaev.l_max;
    } else {
        json a = json::array(), b = json::array();
        for (const auto& v : m.raw.A) a.push_back({v.real(), v.imag()});
        for (std::size_t l = 1; l < m.raw.B.size(); ++l) b.push_back({m.raw.B[l].real(), m.raw.B[l].imag()});
        j["A"] = a;
        j["B"] = b;
    }
    return j;
}

inline json describe(const DiscontinuitySet& ds) {
    json list = json::array();
    for (const auto& d : ds.list)
        list.push_back({{"theta", d.theta},
                        {"kind", to_string(d.kind)},
                        {"left", to_string(d.left.tag)},
                        {"right", to_string(d.right.tag)},
                        {"commuting", d.commuting}});
    return list;
}

inline std::pair<std::size_t, std::size_t> fit_window(const RunConfig& c) {
    const auto& s = c.sizes;
    return {c.fitMin ? c.fitMin : s.front(), c.fitMax ? c.fitMax : s.back()};
}

// ---- commands -----------------------------------------------------------------

inline int cmd_entropy(const Options& o, std::ostream& out) {
    const auto& cfg = o.config;
    const auto& m = need_model(cfg);
    const auto& sizes = need_sizes(cfg);
    CouplingSet c = m.couplings();
    auto ds = find_discontinuities(c);
    auto ac = archetype_count(ds);
    BlockSymbol sym = thermodynamic_blocks(c, sizes.back(), cfg.quadTol, ds, o.threads);
    auto curves = entropy_curves(sym, sizes, cfg.alphas, o.threads);
    auto [lo, hi] = fit_window(cfg);
    json rec;
    rec["model"] = describe(m);
    rec["sizes"] = sizes;
    rec["discontinuities"] = describe(ds);
    rec["warnings"] = ds.warnings;
    rec["N_T"] = ac.N_T;
    rec["c_eff"] = c_eff(ac);
    json per = json::array();
    for (const auto& cur : curves) {
        json e;
        e["alpha"] = cur.alpha;
        std::vector<double> S;
        for (const auto& smp : cur.samples) S.push_back(smp.S);
        e["S"] = S;
        e["predicted_slope"] = predicted_log_coefficient(ac, cur.alpha);
        try {
            e["fitted_slope"] = fit_log_scaling(cur, lo, hi).slope;
        } catch (const InsufficientSamples&) {
            e["fitted_slope"] = nullptr;
        }
        per.push_back(e);
    }
    rec["entropy"] = per;
    out << rec.dump(2) << '\n';
    return Ok;
}

inline int cmd_curve(const Options& o, std::ostream& out) {
    const auto& cfg = o.config;
    const auto& sizes = need_sizes(cfg);
    CouplingSet c = need_model(cfg).couplings();
    BlockSymbol sym = thermodynamic_blocks(c, sizes.back(), cfg.quadTol, o.threads);
    auto curves = entropy_curves(sym, sizes, cfg.alphas, o.threads);
    CsvWriter w(out);
    w.header({"alpha", "X", "S"});
    for (const auto& cur : curves)
        for (const auto& s : cur.samples) w.row({fmt_num(cur.alpha), std::to_string(s.sizeX), fmt_num(s.S)});
    return Ok;
}

inline int cmd_fit(const Options& o, std::ostream& out) {
    const auto& cfg = o.config;
    const auto& sizes = need_sizes(cfg);
    CouplingSet c = need_model(cfg).couplings();
    auto ds = find_discontinuities(c);
    auto ac = archetype_count(ds);
    BlockSymbol sym = thermodynamic_blocks(c, sizes.back(), cfg.quadTol, ds, o.threads);
    auto curves = entropy_curves(sym, sizes, cfg.alphas, o.threads);
    auto [lo, hi] = fit_window(cfg);
    CsvWriter w(out);
    w.header({"alpha", "min_X", "max_X", "samples", "slope", "intercept", "residual_rms", "predicted_slope"});
    for (const auto& cur : curves) {
        auto f = fit_log_scaling(cur, lo, hi);
        w.row({fmt_num(cur.alpha), std::to_string(f.minX), std::to_string(f.maxX), std::to_string(f.used),
               fmt_num(f.slope), fmt_num(f.intercept), fmt_num(f.residualRms),
               fmt_num(predicted_log_coefficient(ac, cur.alpha))});
    }
    return Ok;
}

inline int cmd_scan_dm(const Options& o, std::ostream& out) {
    const auto& cfg = o.config;
    if (!cfg.gamma || !cfg.h) throw ConfigError("scan-dm needs scan.gamma and scan.h");
    auto gs = cfg.gamma->values(), hs = cfg.h->values();
    struct Cell {
        double gamma, h;
        std::string region = "nan", status = "ok";
        double x = std::nan(""), ceff = std::nan("");
        int nt = -1;
    };
    std::vector<Cell> cells;
    for (double g : gs)
        for (double h : hs) cells.push_back({g, h});
    parallel_for(cells.size(), o.threads, [&](std::size_t i) {
        Cell& cell = cells[i];
        DmParams p{1.0, cell.gamma, cfg.scanS, cell.h};
        try {
            cell.region = to_string(dm_region(p));
            if (p.gamma != 0.0) cell.x = dm_x(p);
            auto ac = archetype_count(find_discontinuities(build_dm(p)));
            cell.nt = ac.N_T;
            cell.ceff = c_eff(ac);
        } catch (const Error& e) {
            cell.status = e.kind();
        }
    });
    CsvWriter w(out);
    w.header({"gamma", "h", "s", "region", "x", "N_T", "c_eff", "status"});
    for (const auto& c : cells)
        w.row({fmt_num(c.gamma), fmt_num(c.h), fmt_num(cfg.scanS), c.region, fmt_num(c.x),
               c.nt < 0 ? "nan" : std::to_string(c.nt), fmt_num(c.ceff), c.status});
    return Ok;
}

inline int cmd_scan_kitaev(const Options& o, std::ostream& out) {
    const auto& cfg = o.config;
    if (!cfg.h || !cfg.zeta) throw ConfigError("scan-kitaev needs scan.h and scan.zeta");
    if (cfg.zeta->min <= 0.0) throw ConfigError("scan.zeta must be positive");
    struct Cell {
        double h, zeta;
        std::string status = "ok";
        double ceff = std::nan("");
        int nt = -1;
    };
    std::vector<Cell> cells;
    for (double h : cfg.h->values())
        for (double z : cfg.zeta->values()) cells.push_back({h, z});
    parallel_for(cells.size(), o.threads, [&](std::size_t i) {
        Cell& cell = cells[i];
        try {
            auto ac = archetype_count(find_discontinuities(build_kitaev({cell.h, cell.zeta, cfg.scanAnalytic, 10000})));
            cell.nt = ac.N_T;
            cell.ceff = c_eff(ac);
        } catch (const Error& e) {
            cell.status = e.kind();
        }
    });
    CsvWriter w(out);
    w.header({"h", "zeta", "N_T", "c_eff", "status"});
    for (const auto& c : cells)
        w.row({fmt_num(c.h), fmt_num(c.zeta), c.nt < 0 ? "nan" : std::to_string(c.nt), fmt_num(c.ceff), c.status});
    return Ok;
}

inline int cmd_classify(const Options& o, std::ostream& out) {
    const auto& m = need_model(o.config);
    CouplingSet c = m.couplings();
    auto ds = find_discontinuities(c);
    auto ac = archetype_count(ds);
    json rec;
    rec["model"] = describe(m);
    if (m.type == "dm" && std::abs(m.dm.t - 1.0) < 1e-12) rec["region"] = to_string(dm_region(m.dm));
    rec["discontinuities"] = describe(ds);
    rec["tangential"] = ds.tangential;
    rec["warnings"] = ds.warnings;
    rec["archetypes"] = {{"a", ac.n_a}, {"b", ac.n_b}, {"c", ac.n_c}, {"d", ac.n_d}};
    rec["N_T"] = ac.N_T;
    rec["c_eff"] = c_eff(ac);
    out << rec.dump(2) << '\n';
    return Ok;
}

inline int cmd_oracle(const Options& o, std::ostream& out) {
    const auto& cfg = o.config;
    const auto& m = need_model(cfg);
    const int N = cfg.oracleN, X = cfg.oracleX;
    if (N < 2 || N > 12) throw ConfigError("oracle.N must be in [2, 12]");
    if (X < 1 || X >= N) throw ConfigError("oracle.X must be in [1, N)");
    CouplingSet c = m.couplings();
    if (c.analytic_pairing()) throw ConfigError("oracle needs a finite-range model");
    if (N <= 2 * c.L) throw ConfigError("oracle.N must exceed 2L");
    json rec;
    rec["model"] = describe(m);
    rec["N"] = N;
    rec["X"] = X;
    json per = json::array();
    for (double a : cfg.alphas) {
        FockResult f = fock_oracle(c, N, X, a);
        if (f.degenerate && !o.allowDegenerate)
            throw DegenerateGroundState("many-body ground state is degenerate; pass --allow-degenerate to accept");
        auto spec = spectrum(build_finite(c, ground_occupation(c, std::size_t(N)), std::size_t(X)));
        double s = renyi_entropy(spec, a);
        per.push_back({{"alpha", a},
                       {"fock", f.value},
                       {"correlation", s},
                       {"difference", std::abs(f.value - s)},
                       {"degenerate", f.degenerate}});
    }
    rec["results"] = per;
    out << rec.dump(2) << '\n';
    return Ok;
}

inline int cmd_closed_form(const Options& o, std::ostream& out) {
    const auto& cfg = o.config;
    json rec;
    rec["kind"] = cfg.closedKind;
    const std::string& k = cfg.closedKind;
    if (k == "i_alpha") {
        json per = json::array();
        for (double a : cfg.alphas) {
            auto r = i_alpha_detail(a, 1e-12);
            per.push_back({{"alpha", a}, {"value", r.value}, {"imag_residue", r.imag_residue}});
        }
        rec["values"] = per;
    } else {
        const auto& m = need_model(cfg);
        if (m.type != "dm") throw ConfigError("closed_form." + k + " needs a dm model");
        rec["model"] = describe(m);
        const double X = double(cfg.closedX);
        if (k == "s1") {
            DmRegion r = dm_region(m.dm);
            rec["region"] = to_string(r);
            rec["x"] = dm_x(m.dm);
            rec["S1"] = s1_noncritical(dm_x(m.dm), r);
        } else if (k == "essential") {
            rec["X"] = cfg.closedX;
            json per = json::array();
            for (double a : cfg.alphas)
                per.push_back({{"alpha", a}, {"S", essential_point_entropy(a, m.dm.s, X)}});
            rec["values"] = per;
        } else if (k == "selfdual") {
            rec["X"] = cfg.closedX;
            rec["S1"] = selfdual_entropy(m.dm.s, X);
        } else if (k == "genus1") {
            CouplingSet c = m.couplings();
            auto g = genus1_surface(c);
            rec["X"] = cfg.closedX;
            rec["lambda"] = cfg.lambda;
            rec["period"] = {g.periodMatrix.real(), g.periodMatrix.imag()};
            rec["tau"] = {g.tau.real(), g.tau.imag()};
            rec["log_det"] = genus1_determinant_asymptotic(c, cfg.lambda, X);
            json per = json::array();
            for (double a : cfg.alphas) per.push_back({{"alpha", a}, {"S", genus1_entropy(c, a)}});
            rec["saturated_entropy"] = per;
        } else {
            throw ConfigError("closed_form.kind must be s1, essential, selfdual, genus1 or i_alpha");
        }
    }
    out << rec.dump(2) << '\n';
    return Ok;
}

// Hooks let tests swap pieces for deliberately broken versions.
struct SelfcheckHooks {
    std::function<cd(const Discontinuity&, cd)> jump = [](const Discontinuity& d, cd l) { return jump_coefficient(d, l); };
};

inline int run_selfcheck(std::ostream& out, const SelfcheckHooks& hooks = {}) {
    int failed = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
        if (!ok) ++failed;
    };
    auto guarded = [&](const std::string& name, const std::function<void()>& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(name, false, e.what());
        }
    };
    for (double a : {0.5, 1.0, 2.0, 3.0}) {
        std::string name = "coefficient identity alpha=" + fmt_num(a);
        guarded(name, [&] {
            double v = coefficient_identity_check(a), want = (a + 1.0) / (24.0 * a);
            report(name, std::abs(v - want) < 1e-6, fmt_num(v) + " vs " + fmt_num(want));
        });
    }
    guarded("duality", [&] {
        double worst = 0.0;
        for (double x : {0.1, 0.3, 0.5, 0.75, 0.9})
            worst = std::max(worst, std::abs(s1_noncritical(x, DmRegion::R1a) - s1_noncritical(1.0 / x, DmRegion::R1b)));
        report("duality", worst < 1e-12, "max |S(x) - S(1/x)| = " + fmt_num(worst));
    });
    guarded("theta evenness", [&] {
        double worst = 0.0;
        for (cd P : {cd(0.0, 1.0), cd(0.3, 0.8), cd(-0.2, 1.7)})
            for (cd s : {cd(0.1, 0.0), cd(0.37, 0.2), cd(-0.4, 0.5)})
                worst = std::max(worst, std::abs(genus1_theta(s, P) - genus1_theta(-s, P)));
        report("theta evenness", worst < 1e-13, "max |theta(s) - theta(-s)| = " + fmt_num(worst));
    });
    guarded("jump coefficients", [&] {
        const cd lam = 3.0;
        Mat2 I = Mat2::Identity(), Z;
        Z << 1.0, 0.0, 0.0, -1.0;
        auto mk = [](JumpKind k, Mat2 l, Mat2 r) {
            Discontinuity d;
            d.kind = k;
            d.left.matrix = l;
            d.right.matrix = r;
            return d;
        };
        const cd b = b_mi(lam);
        double e_mi = std::abs(hooks.jump(mk(JumpKind::MI, Z, I), lam) - b);
        double e_ii = std::abs(hooks.jump(mk(JumpKind::II, -I, I), lam) - 2.0 * b);
        double e_mm = std::abs(hooks.jump(mk(JumpKind::MM, Z, -Z), lam) - 2.0 * b);
        double worst = std::max({e_mi, e_ii, e_mm});
        report("jump coefficients", worst < 1e-12,
               "MI " + fmt_num(e_mi) + ", II " + fmt_num(e_ii) + ", MM " + fmt_num(e_mm));
    });
    guarded("particle-hole spectrum", [&] {
        double worst = 0.0;
        for (const auto& p : {DmParams{1.0, 0.5, 0.75, 0.5}, DmParams{1.0, 1.5, 0.75, 2.0}, DmParams{1.0, 1.0, 0.3, 1.0}}) {
            auto ev = spectrum(build_thermodynamic(build_dm(p), 24)).eigenvalues;
            std::sort(ev.begin(), ev.end());
            for (std::size_t i = 0; i < ev.size(); ++i) worst = std::max(worst, std::abs(ev[i] + ev[ev.size() - 1 - i]));
        }
        report("particle-hole spectrum", worst < 1e-8, "max |v_i + v_(n-1-i)| = " + fmt_num(worst));
    });
    return failed ? SelfcheckFailed : Ok;
}

// ---- entry point -----------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Block entanglement entropy of quadratic fermion chains"};
    app.require_subcommand(1);
    std::string configPath, outPath;
    unsigned threads = 1;
    bool allowDegenerate = false;
    app.add_option("--config", configPath, "JSON configuration file");
    app.add_option("--out", outPath, "write results here instead of standard output");
    app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
    app.add_flag("--allow-degenerate", allowDegenerate, "accept a degenerate many-body ground state in oracle");
    const std::vector<std::pair<const char*, const char*>> commands = {
        {"entropy", "entropy curve, classification and slopes as JSON"},
        {"curve", "entropy curve as CSV"},
        {"fit", "log-scaling fit as CSV"},
        {"scan-dm", "central charge map over (gamma, h)"},
        {"scan-kitaev", "central charge map over (h, zeta)"},
        {"classify", "discontinuities and archetype count as JSON"},
        {"oracle", "Fock-space cross-check on a small ring"},
        {"closed-form", "closed-form entropies and genus-1 asymptotics"},
        {"selfcheck", "internal consistency checks"}};
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return ConfigFailure;
    }
    std::string cmd = app.get_subcommands().front()->get_name();

    try {
        if (cmd == "selfcheck") {
            std::ostringstream buf;
            int rc = run_selfcheck(buf);
            if (!outPath.empty()) {
                std::ofstream f(outPath);
                f << buf.str();
            }
            out << buf.str();
            return rc;
        }
        Options o;
        o.config = load_config(configPath);
        o.threads = threads;
        o.allowDegenerate = allowDegenerate;
        if (!outPath.empty()) o.config.out = outPath;

        std::ostringstream buf;
        int rc = Ok;
        if (cmd == "entropy") rc = cmd_entropy(o, buf);
        else if (cmd == "curve") rc = cmd_curve(o, buf);
        else if (cmd == "fit") rc = cmd_fit(o, buf);
        else if (cmd == "scan-dm") rc = cmd_scan_dm(o, buf);
        else if (cmd == "scan-kitaev") rc = cmd_scan_kitaev(o, buf);
        else if (cmd == "classify") rc = cmd_classify(o, buf);
        else if (cmd == "oracle") rc = cmd_oracle(o, buf);
        else if (cmd == "closed-form") rc = cmd_closed_form(o, buf);

        if (o.config.out.empty()) {
            out << buf.str();
        } else {
            std::ofstream f(o.config.out, std::ios::binary);
            if (!f) throw ConfigError("cannot write " + o.config.out);
            f << buf.str();
        }
        return rc;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return ConfigFailure;
    } catch (const Error& e) {
        err << "numerical error: " << e.what() << '\n';
        return NumericalFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return NumericalFailure;
    }
}

}  // namespace blockent::cli
