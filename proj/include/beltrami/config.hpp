#pragma once

#include <fstream>

#include <json.hpp>

#include "beltrami/domains.hpp"
#include "beltrami/expression.hpp"
#include "beltrami/solver.hpp"

namespace beltrami {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Run configuration: grid sizes, solver tolerances, coefficient / boundary /
// map specs, output paths. Round-trips losslessly through its JSON form.
// ---------------------------------------------------------------------------

struct CoefficientSpec {
    std::string kind = "constant";  // constant | radial | expression
    double nu_value = 0.0;          // constant
    std::string sigma_expr;         // radial: sigma(r)
    std::string nu_expr;            // expression: nu(x, y, r, theta)

    json to_json() const {
        json j;
        j["kind"] = kind;
        if (kind == "constant") j["nu"] = nu_value;
        if (kind == "radial") j["sigma"] = sigma_expr;
        if (kind == "expression") j["nu"] = nu_expr;
        return j;
    }
    static CoefficientSpec from_json(const json& j) {
        CoefficientSpec s;
        s.kind = j.value("kind", "constant");
        if (s.kind == "constant") {
            if (!j.contains("nu") || !j["nu"].is_number())
                throw ConfigError("coefficient: constant kind needs a numeric 'nu'");
            s.nu_value = j["nu"].get<double>();
        } else if (s.kind == "radial") {
            if (!j.contains("sigma")) throw ConfigError("coefficient: radial kind needs 'sigma'");
            s.sigma_expr = j["sigma"].get<std::string>();
        } else if (s.kind == "expression") {
            if (!j.contains("nu") || !j["nu"].is_string())
                throw ConfigError("coefficient: expression kind needs a string 'nu'");
            s.nu_expr = j["nu"].get<std::string>();
        } else {
            throw ConfigError("coefficient: unknown kind '" + s.kind + "'");
        }
        return s;
    }

    Coefficient build(const GridPtr& g) const {
        if (kind == "constant") return Coefficient::constant(g, nu_value);
        if (kind == "radial") {
            SymbolicField sig(sigma_expr);
            for (const std::string& v : sig.variables())
                if (v != "r")
                    throw ConfigError("coefficient: radial sigma may only use 'r'");
            auto sfn = [sig](double r) { return sig(r, 0.0); };
            auto dfn = [sig](double r) { return sig.fx->eval(r, 0.0); };
            return Coefficient::radial_sigma(g, sfn, dfn);
        }
        SymbolicField nu(nu_expr);
        return Coefficient::from_callables(
            g, [nu](double x, double y) { return nu(x, y); },
            [nu](double x, double y) { return nu.dbar(x, y); });
    }
};

struct BoundarySpec {
    std::string kind = "expression";  // expression | csv
    std::string expr = "cos(theta)";
    std::string path;

    json to_json() const {
        json j;
        j["kind"] = kind;
        if (kind == "expression") j["expr"] = expr;
        if (kind == "csv") j["path"] = path;
        return j;
    }
    static BoundarySpec from_json(const json& j) {
        BoundarySpec s;
        s.kind = j.value("kind", "expression");
        if (s.kind == "expression") {
            if (!j.contains("expr")) throw ConfigError("boundary: expression kind needs 'expr'");
            s.expr = j["expr"].get<std::string>();
        } else if (s.kind == "csv") {
            if (!j.contains("path")) throw ConfigError("boundary: csv kind needs 'path'");
            s.path = j["path"].get<std::string>();
        } else {
            throw ConfigError("boundary: unknown kind '" + s.kind + "'");
        }
        return s;
    }
};

struct MapSpec {
    std::string kind = "identity";  // identity | affine | quadratic | expression
    cd a{1.0, 0.0}, b{0.0, 0.0};    // affine a z + b
    cd eps{0.0, 0.0};               // quadratic z + eps z^2
    std::string re_expr, im_expr;   // expression map

    json to_json() const {
        json j;
        j["kind"] = kind;
        if (kind == "affine") {
            j["a"] = {a.real(), a.imag()};
            j["b"] = {b.real(), b.imag()};
        }
        if (kind == "quadratic") j["eps"] = {eps.real(), eps.imag()};
        if (kind == "expression") {
            j["re"] = re_expr;
            j["im"] = im_expr;
        }
        return j;
    }
    static MapSpec from_json(const json& j) {
        MapSpec s;
        s.kind = j.value("kind", "identity");
        auto get_cd = [&](const char* key, cd dflt) {
            if (!j.contains(key)) return dflt;
            auto arr = j[key];
            if (!arr.is_array() || arr.size() != 2)
                throw ConfigError(std::string("map: '") + key + "' must be [re, im]");
            return cd(arr[0].get<double>(), arr[1].get<double>());
        };
        if (s.kind == "affine") {
            s.a = get_cd("a", cd(1, 0));
            s.b = get_cd("b", cd(0, 0));
        } else if (s.kind == "quadratic") {
            s.eps = get_cd("eps", cd(0.3, 0));
        } else if (s.kind == "expression") {
            if (!j.contains("re") || !j.contains("im"))
                throw ConfigError("map: expression kind needs 're' and 'im'");
            s.re_expr = j["re"].get<std::string>();
            s.im_expr = j["im"].get<std::string>();
        } else if (s.kind != "identity") {
            throw ConfigError("map: unknown kind '" + s.kind + "'");
        }
        return s;
    }

    ConformalMap build() const {
        if (kind == "identity") return ConformalMap::identity();
        if (kind == "affine") return ConformalMap::affine(a, b);
        if (kind == "quadratic") return ConformalMap::quadratic(eps);
        SymbolicField re(re_expr), im(im_expr);
        // psi analytic: psi' = d_x(Re psi) + i d_x(Im psi); analyticity is
        // the caller's attestation, validate() checks the computable parts
        auto psi = [re, im](cd z) { return cd(re(z.real(), z.imag()), im(z.real(), z.imag())); };
        auto dpsi = [re, im](cd z) {
            return cd(re.fx->eval(z.real(), z.imag()), im.fx->eval(z.real(), z.imag()));
        };
        return ConformalMap(psi, dpsi, "expression");
    }
};

struct RunConfig {
    int n_theta = 256;
    int radial_panels = 8;
    int nodes_per_panel = 8;
    SolveConfig solve;
    CoefficientSpec coefficient;
    BoundarySpec boundary;
    MapSpec map;
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    int threads = 1;
    bool oracle = false;
    // command-specific knobs
    std::string neumann_expr = "cos(theta)";
    std::string factor_variant = "plus";
    std::vector<int> density_ks = {4, 8, 16, 32};
    std::vector<std::pair<double, double>> density_arcs = {{0.0, pi}};
    std::string density_target_re = "cos(theta)";
    std::string density_target_im = "-sin(theta)";
    std::string op_name = "cauchy_area";
    std::string op_input;
    std::vector<std::string> verify_only;

    json to_json() const {
        json j;
        j["grid"] = {{"n_theta", n_theta},
                     {"radial_panels", radial_panels},
                     {"nodes_per_panel", nodes_per_panel}};
        j["solve"] = {{"p", solve.p},
                      {"inner_tol", solve.inner_tol},
                      {"outer_tol", solve.outer_tol},
                      {"max_iter", solve.max_iter},
                      {"restart", solve.restart},
                      {"compat_tol", solve.compat_tol}};
        j["coefficient"] = coefficient.to_json();
        j["boundary"] = boundary.to_json();
        j["map"] = map.to_json();
        j["output_dir"] = output_dir;
        j["seed"] = seed;
        j["threads"] = threads;
        j["oracle"] = oracle;
        j["neumann"] = {{"g", neumann_expr}};
        j["factorize"] = {{"variant", factor_variant}};
        json arcs = json::array();
        for (auto [a, b] : density_arcs) arcs.push_back({a, b});
        j["density"] = {{"ks", density_ks},
                        {"arcs", arcs},
                        {"target_re", density_target_re},
                        {"target_im", density_target_im}};
        j["op"] = {{"operator", op_name}, {"input", op_input}};
        j["verify"] = {{"only", verify_only}};
        return j;
    }

    static RunConfig from_json(const json& j) {
        RunConfig c;
        static const std::set<std::string> known = {
            "grid",     "solve",   "coefficient", "boundary", "map", "output_dir",
            "seed",     "threads", "oracle",      "neumann",  "factorize",
            "density",  "op",      "verify"};
        for (auto it = j.begin(); it != j.end(); ++it)
            if (!known.count(it.key()))
                throw ConfigError("config: unknown key '" + it.key() + "'");
        if (j.contains("grid")) {
            const json& g = j["grid"];
            c.n_theta = g.value("n_theta", 256);
            c.radial_panels = g.value("radial_panels", 8);
            c.nodes_per_panel = g.value("nodes_per_panel", 8);
        }
        if (j.contains("solve")) {
            const json& s = j["solve"];
            c.solve.p = s.value("p", 2.0);
            c.solve.inner_tol = s.value("inner_tol", 1e-10);
            c.solve.outer_tol = s.value("outer_tol", 1e-8);
            c.solve.max_iter = s.value("max_iter", 400);
            c.solve.restart = s.value("restart", 60);
            c.solve.compat_tol = s.value("compat_tol", 1e-8);
        }
        if (j.contains("coefficient")) c.coefficient = CoefficientSpec::from_json(j["coefficient"]);
        if (j.contains("boundary")) c.boundary = BoundarySpec::from_json(j["boundary"]);
        if (j.contains("map")) c.map = MapSpec::from_json(j["map"]);
        c.output_dir = j.value("output_dir", std::string("."));
        c.seed = j.value("seed", std::uint64_t{0});
        c.threads = j.value("threads", 1);
        c.oracle = j.value("oracle", false);
        if (j.contains("neumann")) c.neumann_expr = j["neumann"].value("g", "cos(theta)");
        if (j.contains("factorize"))
            c.factor_variant = j["factorize"].value("variant", "plus");
        if (j.contains("density")) {
            const json& d = j["density"];
            if (d.contains("ks")) c.density_ks = d["ks"].get<std::vector<int>>();
            if (d.contains("arcs")) {
                c.density_arcs.clear();
                for (const auto& arc : d["arcs"])
                    c.density_arcs.emplace_back(arc[0].get<double>(), arc[1].get<double>());
            }
            c.density_target_re = d.value("target_re", "cos(theta)");
            c.density_target_im = d.value("target_im", "-sin(theta)");
        }
        if (j.contains("op")) {
            c.op_name = j["op"].value("operator", "cauchy_area");
            c.op_input = j["op"].value("input", "");
        }
        if (j.contains("verify") && j["verify"].contains("only"))
            c.verify_only = j["verify"]["only"].get<std::vector<std::string>>();
        c.solve.seed = c.seed;
        return c;
    }

    static RunConfig load(const std::string& path,
                          const std::vector<std::string>& overrides = {}) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open '" + path + "'");
        json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: parse failure: ") + e.what());
        }
        apply_overrides(j, overrides);
        return from_json(j);
    }

    /// --set dotted.key=value; the value is parsed as JSON if possible,
    /// else taken as a string.
    static void apply_overrides(json& j, const std::vector<std::string>& overrides) {
        for (const std::string& ov : overrides) {
            auto eq = ov.find('=');
            if (eq == std::string::npos)
                throw ConfigError("override must be key=value: '" + ov + "'");
            std::string key = ov.substr(0, eq), val = ov.substr(eq + 1);
            json* cur = &j;
            std::size_t pos = 0;
            while (true) {
                auto dot = key.find('.', pos);
                std::string part = key.substr(pos, dot - pos);
                if (dot == std::string::npos) {
                    json parsed;
                    try {
                        parsed = json::parse(val);
                    } catch (...) {
                        parsed = val;
                    }
                    (*cur)[part] = parsed;
                    break;
                }
                cur = &(*cur)[part];
                pos = dot + 1;
            }
        }
    }

    GridPtr make_grid_ptr() const { return make_grid(n_theta, radial_panels, nodes_per_panel); }

    BoundarySpectrum build_boundary(const GridPtr& g) const {
        if (boundary.kind == "expression") {
            SymbolicField f(boundary.expr);
            std::vector<double> s(g->n_theta());
            for (int k = 0; k < g->n_theta(); ++k) {
                double th = g->circle.theta(k);
                s[k] = f(std::cos(th), std::sin(th));
            }
            return BoundarySpectrum::from_real_samples(s);
        }
        // csv path handled by io.hpp (included by commands)
        throw ConfigError("boundary: csv input must be loaded through the command layer");
    }
};

inline json report_to_json(const SolveReport& rep) {
    json j;
    json stages = json::array();
    for (const auto& s : rep.stages)
        stages.push_back({{"name", s.name}, {"residual", s.residual}, {"iterations", s.iterations}});
    j["stages"] = stages;
    json values = json::object();
    for (const auto& [k, v] : rep.values) values[k] = v;
    j["values"] = values;
    j["warnings"] = rep.warnings;
    return j;
}

}  // namespace beltrami
