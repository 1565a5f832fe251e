#include "bellri/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "bellri/error.hpp"
#include "bellri/io.hpp"
#include "bellri/multiparty.hpp"
#include "bellri/optimizer.hpp"
#include "bellri/qmodel.hpp"
#include "bellri/ri.hpp"

namespace bellri::cli {
namespace {

using io::Json;

struct Outcome {
    Json body;
    bool pass = true;
};

std::string read_input(const Command& cmd, std::istream& in) {
    if (cmd.input.empty() || cmd.input == "-") {
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    std::ifstream f(cmd.input);
    if (!f) throw MalformedInput("cannot open input file '" + cmd.input + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Json params_json(const optimizer::ScenarioParams& p) {
    Json obs = Json::array();
    for (const auto& b : p.observables) obs.push_back({{"theta", b.theta}, {"phi", b.phi}});
    return {{"schmidt_angle", p.schmidt_angle}, {"observables", obs}};
}

Outcome do_classify(const Json& in, double tol) {
    const auto v = ri::classify(io::parse_correlator_table(in), tol);
    return {io::to_json(v), v.quantum_compatible && v.ri_feasible};
}

Outcome do_ri_intervals(const Json& in) {
    if (in.contains("ab")) {
        const auto t = io::parse_tripartite(in);
        const auto res = ri::lemma1_intervals(t);
        Json ctx = Json::array();
        for (const auto& c : res.contexts)
            ctx.push_back({{"j", c.j},
                           {"k", c.k},
                           {"feasible", c.feasible},
                           {"diagonal", c.diagonal},
                           {"interval", c.interval ? io::to_json(*c.interval) : Json(nullptr)}});
        Json body{{"contexts", ctx}, {"common_r", res.common_r ? Json(*res.common_r) : Json(nullptr)}};
        return {body, res.common_r.has_value()};
    }
    const auto res = ri::ri_feasible_bipartite(io::parse_correlator_table(in));
    Json alice = Json::array(), bob = Json::array();
    for (const auto& iv : res.alice) alice.push_back(io::to_json(iv));
    for (const auto& iv : res.bob) bob.push_back(io::to_json(iv));
    Json body{{"alice", alice},
              {"bob", bob},
              {"feasible", res.feasible},
              {"witness_r", res.witness_r ? Json(*res.witness_r) : Json(nullptr)},
              {"witness_r_bar", res.witness_r_bar ? Json(*res.witness_r_bar) : Json(nullptr)}};
    return {body, res.feasible};
}

Outcome do_geometry(const Json& in, double tol) {
    const auto ct = io::parse_correlator_table(in);
    const Mat2 rho = ct.pearson_values();
    Json circles = Json::array();
    std::array<ri::RInterval, 2> iv{ri::r_interval_bipartite(ct, 0), ri::r_interval_bipartite(ct, 1)};
    for (int j = 0; j < 2; ++j)
        circles.push_back({{"j", j}, {"center", iv[j].center()}, {"radius", iv[j].half_width()}});
    const double lo = std::max(iv[0].lo, iv[1].lo);
    const double hi = std::min(iv[0].hi, iv[1].hi);
    Json body{{"circles", circles}};
    bool pass = true;
    if (hi - lo < -tol) {
        body["relation"] = "disjoint";
        body["gap"] = ri::epsilon_gap(rho);
        body["intersection"] = nullptr;
        pass = false;
    } else if (hi - lo <= tol) {
        const double x = 0.5 * (lo + hi);
        body["relation"] = "tangent";
        body["gap"] = 0.0;
        body["intersection"] = {{"point", {x, 0.0}}};
    } else {
        body["relation"] = "overlapping";
        body["gap"] = 0.0;
        body["intersection"] = {{"segment", {lo, hi}}};
    }
    return {body, pass};
}

Outcome do_pr_demo() {
    const auto demo = ri::pr_box_demo();
    Json ctx = Json::array();
    for (const auto& c : demo.contexts)
        ctx.push_back({{"j", c.j},
                       {"k", c.k},
                       {"r", c.r},
                       {"psd_at_r", c.psd_at_r},
                       {"psd_at_zero", c.psd_at_zero},
                       {"det_at_zero", c.det_at_zero},
                       {"a0a1_signal", c.signal_a0a1}});
    Json body{{"contexts", ctx}, {"forced_rho_ab", demo.forced_rho_ab}, {"ri_violated", demo.ri_violated}};
    return {body, !demo.ri_violated};
}

Outcome do_simulate(const Json& in, double tol) {
    const auto sc = io::parse_scenario(in);
    const auto m = qmodel::moments(sc);
    const auto sr = qmodel::sr_check(sc, 0, tol);
    const auto tlm = ri::tlm_check(m.table(), tol);
    bool psd = true;
    for (int j = 0; j < 2; ++j) psd = psd && linalg::is_psd(qmodel::quantum_cov_matrix(sc, j), tol);
    Json body{{"moments", io::to_json(m)},
              {"sr", {{"lhs", sr.lhs}, {"rhs", sr.rhs}, {"pass", sr.pass}}},
              {"tlm", io::to_json(tlm)},
              {"cov_matrix_psd", psd}};
    return {body, sr.pass && tlm.pass && psd};
}

Outcome do_theorem2(const Json& in, double tol) {
    const auto sc = io::parse_scenario(in);
    const auto r = qmodel::theorem2_check(sc, tol);
    auto sides = [](const qmodel::InequalitySides& s) {
        return Json{{"lhs", s.lhs}, {"rhs", s.rhs}, {"pass", s.pass}};
    };
    Json body{{"row1", sides(r.rows[0])},
              {"row2", sides(r.rows[1])},
              {"per_setting", {sides(r.ns[0]), sides(r.ns[1])}},
              {"clamped", r.clamped},
              {"pass", r.pass}};
    return {body, r.pass};
}

Outcome do_theorem3(const Json& in, double tol) {
    const auto sc = io::parse_scenario(in);
    const auto r = qmodel::theorem3_check(sc, tol);
    const auto t = qmodel::tsirelson_eta_bound(sc, tol);
    Json body{{"chsh_term", r.chsh_term},
              {"r_term", r.r_term},
              {"total", r.total},
              {"symmetric_configuration", r.symmetric_configuration},
              {"pass", r.pass},
              {"eta_bound", {{"chsh", t.chsh}, {"eta_a", t.eta_a}, {"eta_b", t.eta_b}, {"bound", t.bound},
                             {"pass", t.pass}}}};
    return {body, r.pass && t.pass};
}

Outcome do_monogamy(const Json& in, double tol) {
    double b_ab = 0.0, b_ac = 0.0;
    if (in.contains("chsh_ab")) {
        if (!in.at("chsh_ab").is_number() || !in.contains("chsh_ac") || !in.at("chsh_ac").is_number())
            throw MalformedInput("fields 'chsh_ab' and 'chsh_ac' must be numbers");
        b_ab = in.at("chsh_ab").get<double>();
        b_ac = in.at("chsh_ac").get<double>();
    } else if (in.contains("ab")) {
        const auto t = io::parse_tripartite(in);
        b_ab = chsh(t.ab);
        b_ac = chsh(t.ac);
    } else {
        const auto sc = io::parse_scenario(in);
        if (sc.parties() < 3) throw MalformedInput("monogamy needs a three-party scenario");
        b_ab = qmodel::moments(sc, 0, 1).chsh();
        b_ac = qmodel::moments(sc, 0, 2).chsh();
    }
    const auto r = multiparty::monogamy_check(b_ab, b_ac, tol);
    Json body{{"chsh_ab", b_ab},     {"chsh_ac", b_ac},         {"sum_sq", r.sum_sq},
              {"sum_abs", r.sum_abs}, {"pass_sq", r.pass_sq}, {"pass_abs", r.pass_abs}};
    return {body, r.pass_sq && r.pass_abs};
}

Outcome do_nparty(const Json& in, double tol) {
    const auto npc = io::parse_nparty(in);
    double r_prime = 0.0;
    if (in.contains("r_prime")) {
        if (!in.at("r_prime").is_number()) throw MalformedInput("field 'r_prime' must be a number");
        r_prime = in.at("r_prime").get<double>();
    }
    const auto r = multiparty::nparty_bound_check(npc, r_prime, tol);
    Json body{{"chsh", r.chsh},
              {"sum_abs", r.sum_abs},
              {"refined_bound", r.refined_bound},
              {"bound", r.bound},
              {"rank_links", r.rank_links},
              {"pass_refined", r.pass_refined},
              {"pass_bound", r.pass_bound},
              {"pass", r.pass}};
    return {body, r.pass};
}

Outcome do_zeta_bound(const Json& in, double tol) {
    const auto t = io::parse_tripartite(in);
    const auto ctx = ri::all_contexts();
    Json zetas = Json::array();
    for (const auto& [l, k] : ctx) {
        const auto iv = multiparty::zeta_interval(t, l, k);
        zetas.push_back({{"l", l},
                         {"k", k},
                         {"zeta00", multiparty::zeta(t, 0, 0, l, k)},
                         {"zeta01", multiparty::zeta(t, 0, 1, l, k)},
                         {"zeta11", multiparty::zeta(t, 1, 1, l, k)},
                         {"interval", iv ? io::to_json(*iv) : Json(nullptr)}});
    }
    Json checks = Json::array();
    bool pass = true;
    for (std::size_t a = 0; a < ctx.size(); ++a)
        for (std::size_t b = a + 1; b < ctx.size(); ++b) {
            const auto r = multiparty::theorem4_check(t, {ctx[a].first, ctx[a].second}, {ctx[b].first, ctx[b].second},
                                                      tol);
            pass = pass && r.pass;
            checks.push_back({{"first", {ctx[a].first, ctx[a].second}},
                              {"second", {ctx[b].first, ctx[b].second}},
                              {"lhs", r.lhs},
                              {"rhs", r.rhs},
                              {"pass", r.pass}});
        }
    return {{{"contexts", zetas}, {"checks", checks}, {"pass", pass}}, pass};
}

Outcome do_optimize(const Command& cmd) {
    optimizer::OptConfig cfg;
    cfg.restarts = cmd.restarts;
    cfg.seed = cmd.seed;
    optimizer::OptResult r;
    if (cmd.eta) {
        r = optimizer::maximize(optimizer::eta_penalty_objective(*cmd.eta, 1e3), cfg);
        for (double w : {1e5, 1e7}) r = optimizer::refine(optimizer::eta_penalty_objective(*cmd.eta, w), r.best_params, cfg);
    } else {
        r = optimizer::maximize(optimizer::chsh_objective, cfg);
    }
    const double chsh = optimizer::chsh_objective(r.best_params.decode());
    Json body{{"best_value", r.best_value},
              {"chsh", chsh},
              {"trajectory_max", r.trajectory_max},
              {"evaluations", r.evaluations},
              {"best_restart", r.best_restart},
              {"trace", r.trace},
              {"best_params", params_json(r.best_params)}};
    return {body, true};
}

Outcome do_eta_curve(const Command& cmd, const Json& in) {
    std::vector<double> grid{0.0, 0.25, 0.5, 1.0 / std::numbers::sqrt2, 0.9};
    if (!in.is_null()) {
        const Json& g = in.is_object() && in.contains("eta") ? in.at("eta") : in;
        if (!g.is_array()) throw MalformedInput("eta grid must be an array or an object with field 'eta'");
        grid.clear();
        for (const auto& v : g) {
            if (!v.is_number()) throw MalformedInput("field 'eta' must hold numbers");
            grid.push_back(v.get<double>());
        }
    }
    optimizer::OptConfig cfg;
    cfg.restarts = cmd.restarts;
    cfg.seed = cmd.seed;
    const auto pts = optimizer::trace_eta_curve(grid, cfg);
    Json arr = Json::array();
    bool pass = true;
    for (const auto& p : pts) {
        pass = pass && p.feasible && p.max_chsh <= p.bound + 5e-3;
        arr.push_back({{"eta", p.eta},
                       {"max_chsh", p.max_chsh},
                       {"achieved_eta", p.achieved_eta},
                       {"bound", p.bound},
                       {"feasible", p.feasible}});
    }
    return {arr, pass};
}

bool needs_input(const std::string& verb) { return verb != "pr-demo" && verb != "optimize" && verb != "eta-curve"; }

}  // namespace

const std::vector<std::string>& verbs() {
    static const std::vector<std::string> v{"classify", "ri-intervals", "tlm-check", "epsilon",  "pr-demo",
                                            "simulate", "theorem2",     "theorem3",  "monogamy", "nparty",
                                            "zeta-bound", "optimize",   "eta-curve", "geometry"};
    return v;
}

int run(const Command& cmd, std::istream& in, std::ostream& out, std::ostream& err) {
    try {
        if (!(cmd.tol > 0.0)) throw MalformedInput("--tol must be positive");
        if (cmd.restarts < 1) throw MalformedInput("--restarts must be positive");
        Json input;
        if (needs_input(cmd.verb) || (cmd.verb == "eta-curve" && cmd.input != "-" && !cmd.input.empty()))
            input = io::parse_text(read_input(cmd, in));

        Outcome o;
        const std::string& v = cmd.verb;
        if (v == "classify") o = do_classify(input, cmd.tol);
        else if (v == "ri-intervals") o = do_ri_intervals(input);
        else if (v == "tlm-check") {
            const auto t = ri::tlm_check(io::parse_correlator_table(input), cmd.tol);
            o = {io::to_json(t), t.pass};
        } else if (v == "epsilon") {
            const double e = ri::epsilon_gap(io::parse_correlator_table(input));
            o = {{{"epsilon", e}}, e == 0.0};
        } else if (v == "pr-demo") o = do_pr_demo();
        else if (v == "simulate") o = do_simulate(input, cmd.tol);
        else if (v == "theorem2") o = do_theorem2(input, cmd.tol);
        else if (v == "theorem3") o = do_theorem3(input, cmd.tol);
        else if (v == "monogamy") o = do_monogamy(input, cmd.tol);
        else if (v == "nparty") o = do_nparty(input, cmd.tol);
        else if (v == "zeta-bound") o = do_zeta_bound(input, cmd.tol);
        else if (v == "optimize") o = do_optimize(cmd);
        else if (v == "eta-curve") o = do_eta_curve(cmd, input);
        else if (v == "geometry") o = do_geometry(input, cmd.tol);
        else throw MalformedInput("unknown verb '" + v + "'");

        const std::string text = o.body.dump(2) + "\n";
        if (cmd.out.empty()) {
            out << text;
        } else {
            std::ofstream f(cmd.out);
            if (!f) throw MalformedInput("cannot open output file '" + cmd.out + "'");
            f << text;
        }
        return o.pass ? 0 : 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace bellri::cli
