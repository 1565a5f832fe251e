#include "bellri/io.hpp"

#include <cmath>

#include "bellri/error.hpp"

namespace bellri::io {
namespace {

const Json& field(const Json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw MalformedInput(std::string("missing field '") + name + "'");
    return j.at(name);
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) throw MalformedInput("field '" + where + "' must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw MalformedInput("field '" + where + "' must be finite");
    return v;
}

std::vector<double> numbers(const Json& j, const std::string& where) {
    if (!j.is_array()) throw MalformedInput("field '" + where + "' must be an array");
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], where + "[" + std::to_string(k) + "]"));
    return out;
}

std::array<double, 2> pair(const Json& j, const std::string& where) {
    const auto v = numbers(j, where);
    if (v.size() != 2) throw MalformedInput("field '" + where + "' must have two entries");
    return {v[0], v[1]};
}

Mat2 mat2(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw MalformedInput("field '" + where + "' must be a 2x2 array");
    Mat2 m{};
    for (int i = 0; i < 2; ++i) {
        const auto row = pair(j[i], where + "[" + std::to_string(i) + "]");
        m[i] = row;
    }
    return m;
}

std::vector<std::vector<double>> matrix(const Json& j, const std::string& where) {
    if (!j.is_array()) throw MalformedInput("field '" + where + "' must be a nested array");
    std::vector<std::vector<double>> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(numbers(j[k], where + "[" + std::to_string(k) + "]"));
    return out;
}

linalg::ComplexMatrix complex_matrix(const Json& j, const std::string& where) {
    const auto re = matrix(field(j, "re"), where + ".re");
    const auto im = j.contains("im") ? matrix(j.at("im"), where + ".im")
                                     : std::vector<std::vector<double>>(re.size(), std::vector<double>(re.size()));
    const std::size_t n = re.size();
    if (n == 0 || im.size() != n) throw MalformedInput("field '" + where + "' has inconsistent shape");
    linalg::ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        if (re[r].size() != n || im[r].size() != n) throw MalformedInput("field '" + where + "' must be square");
        for (std::size_t c = 0; c < n; ++c) m(r, c) = {re[r][c], im[r][c]};
    }
    return m;
}

std::array<qmodel::Observable, 2> observable_pair(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw MalformedInput("field '" + where + "' must list two observables");
    return {parse_observable(j[0], where + "[0]"), parse_observable(j[1], where + "[1]")};
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json parse_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedInput(std::string("invalid JSON: ") + e.what());
    }
}

ProbabilityTable parse_probability_table(const Json& j) {
    ProbabilityTable pt;
    pt.outcomes_a = numbers(field(j, "outcomes_a"), "probabilities.outcomes_a");
    pt.outcomes_b = numbers(field(j, "outcomes_b"), "probabilities.outcomes_b");
    const Json& p = field(j, "p");
    if (!p.is_array() || p.size() != 2) throw MalformedInput("field 'probabilities.p' must be a 2x2 array of tables");
    for (int i = 0; i < 2; ++i) {
        if (!p[i].is_array() || p[i].size() != 2)
            throw MalformedInput("field 'probabilities.p[" + std::to_string(i) + "]' must hold two tables");
        for (int k = 0; k < 2; ++k)
            pt.p[i][k] = matrix(p[i][k], "probabilities.p[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    pt.validate();
    return pt;
}

CorrelatorTable parse_correlator_table(const Json& j) {
    if (!j.is_object()) throw MalformedInput("input must be a JSON object");
    if (j.contains("fixture")) {
        const auto name = j.at("fixture").get<std::string>();
        if (name == "pr-box") return from_probability_table(pr_box_probability_table());
        if (name == "uniform") return from_probability_table(uniform_probability_table());
        if (name == "tsirelson") return tsirelson_table();
        if (name == "zero") return zero_table();
        throw MalformedInput("unknown fixture '" + name + "'");
    }
    if (j.contains("probabilities")) return from_probability_table(parse_probability_table(j.at("probabilities")));
    if (j.contains("weights")) return lhv::correlators_of(parse_ensemble(j)).table;
    // pearson first, so emitted tables (which carry both) re-parse with their moments
    if (j.contains("pearson")) {
        const Mat2 rho = mat2(j.at("pearson"), "pearson");
        for (const auto& row : rho)
            for (double v : row)
                if (std::abs(v) > 1.0 + 1e-12) throw MalformedInput("field 'pearson' entries must lie in [-1, 1]");
        std::array<double, 2> va{1.0, 1.0}, vb{1.0, 1.0}, ma{}, mb{};
        if (j.contains("variances")) {
            va = pair(field(j.at("variances"), "a"), "variances.a");
            vb = pair(field(j.at("variances"), "b"), "variances.b");
        }
        if (j.contains("means")) {
            ma = pair(field(j.at("means"), "a"), "means.a");
            mb = pair(field(j.at("means"), "b"), "means.b");
        }
        return CorrelatorTable::from_pearson(rho, va, vb, ma, mb);
    }
    if (j.contains("correlators")) {
        const Mat2 e = mat2(j.at("correlators"), "correlators");
        for (const auto& row : e)
            for (double v : row)
                if (std::abs(v) > 1.0) throw MalformedInput("field 'correlators' entries must lie in [-1, 1]");
        CorrelatorTable ct = CorrelatorTable::from_pearson(e);
        ct.binary_pm1 = true;
        return ct;
    }
    throw MalformedInput("expected one of 'fixture', 'probabilities', 'pearson', 'correlators', 'weights'");
}

lhv::LhvEnsemble parse_ensemble(const Json& j) {
    const auto w = numbers(field(j, "weights"), "weights");
    if (w.size() != lhv::kVertexCount) throw MalformedInput("field 'weights' must have 16 entries");
    std::array<double, lhv::kVertexCount> a{};
    std::copy(w.begin(), w.end(), a.begin());
    return lhv::LhvEnsemble(a);
}

qmodel::Observable parse_observable(const Json& j, const std::string& where) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "X") return qmodel::Observable::pauli_x();
        if (s == "Y") return qmodel::Observable::pauli_y();
        if (s == "Z") return qmodel::Observable::pauli_z();
        if (s == "I") return qmodel::Observable(linalg::ComplexMatrix::identity(2));
        throw MalformedInput("field '" + where + "': unknown observable '" + s + "'");
    }
    if (j.is_object() && j.contains("bloch")) {
        const auto n = numbers(j.at("bloch"), where + ".bloch");
        if (n.size() != 3) throw MalformedInput("field '" + where + ".bloch' must have three entries");
        return qmodel::Observable::bloch(n[0], n[1], n[2]);
    }
    if (j.is_object() && j.contains("re")) {
        try {
            return qmodel::Observable(complex_matrix(j, where));
        } catch (const MalformedInput& e) {
            throw MalformedInput("field '" + where + "': " + e.what());
        }
    }
    throw MalformedInput("field '" + where + "' is not an observable");
}

qmodel::QuantumScenario parse_scenario(const Json& j) {
    const auto dims_raw = numbers(field(j, "dims"), "dims");
    std::vector<std::size_t> dims;
    for (double d : dims_raw) {
        if (d != std::floor(d) || d < 1) throw MalformedInput("field 'dims' must hold positive integers");
        dims.push_back(static_cast<std::size_t>(d));
    }
    std::vector<std::array<qmodel::Observable, 2>> obs;
    obs.push_back(observable_pair(field(j, "alice_obs"), "alice_obs"));
    obs.push_back(observable_pair(field(j, "bob_obs"), "bob_obs"));
    if (j.contains("charlie_obs")) obs.push_back(observable_pair(j.at("charlie_obs"), "charlie_obs"));
    if (obs.size() != dims.size()) throw MalformedInput("field 'dims' must list one dimension per party");

    auto state = [&]() -> qmodel::QuantumState {
        if (j.contains("density")) {
            const auto rho = complex_matrix(j.at("density"), "density");
            return qmodel::QuantumState::mixed(linalg::HermitianMatrix::from_dense(rho, 1e-12));
        }
        const Json& s = field(j, "state");
        const auto re = numbers(field(s, "re"), "state.re");
        const auto im = s.contains("im") ? numbers(s.at("im"), "state.im") : std::vector<double>(re.size(), 0.0);
        if (im.size() != re.size()) throw MalformedInput("fields 'state.re' and 'state.im' differ in length");
        qmodel::StateVector v(re.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = {re[k], im[k]};
        return qmodel::QuantumState::pure(std::move(v));
    }();
    qmodel::QuantumScenario sc{std::move(dims), std::move(state), std::move(obs)};
    sc.validate();
    return sc;
}

TripartiteCorrelatorTable parse_tripartite(const Json& j) {
    TripartiteCorrelatorTable t;
    t.ab = mat2(field(j, "ab"), "ab");
    t.ac = mat2(field(j, "ac"), "ac");
    t.bc = mat2(field(j, "bc"), "bc");
    t.validate();
    return t;
}

multiparty::NPartyCorrelators parse_nparty(const Json& j) {
    const Json& ex = field(j, "experimenters");
    if (!ex.is_array()) throw MalformedInput("field 'experimenters' must be an array");
    multiparty::NPartyCorrelators npc;
    for (std::size_t s = 0; s < ex.size(); ++s) {
        const std::string where = "experimenters[" + std::to_string(s) + "]";
        npc.experimenters.push_back(
            {pair(field(ex[s], "first"), where + ".first"), pair(field(ex[s], "second"), where + ".second")});
    }
    npc.validate();
    return npc;
}

Json to_json(const CorrelatorTable& ct) {
    Json p = Json::array();
    for (int i = 0; i < 2; ++i) {
        Json row = Json::array();
        for (int k = 0; k < 2; ++k) row.push_back(optional_number(ct.pearson[i][k]));
        p.push_back(row);
    }
    return {{"pearson", p},
            {"variances", {{"a", ct.var_a}, {"b", ct.var_b}}},
            {"means", {{"a", ct.mean_a}, {"b", ct.mean_b}}},
            {"correlators", ct.correlator},
            {"degenerate", ct.degenerate},
            {"signaling_in_variance", ct.signaling_in_variance}};
}

Json to_json(const ri::RInterval& iv) { return {{"lo", iv.lo}, {"hi", iv.hi}, {"context", iv.context}}; }

Json to_json(const ri::Verdict& v) {
    Json intervals = Json::array();
    for (const auto& iv : v.intervals) intervals.push_back(to_json(iv));
    return {{"classification", classification(v)},
            {"local", v.local ? Json(*v.local) : Json(nullptr)},
            {"quantum_compatible", v.quantum_compatible},
            {"ri_feasible", v.ri_feasible},
            {"witness_r", optional_number(v.witness_r)},
            {"epsilon", v.epsilon},
            {"chsh", v.chsh},
            {"intervals", intervals},
            {"violated", v.violated.empty() ? Json(nullptr) : Json(v.violated)}};
}

Json to_json(const ri::TlmResult& t) {
    return {{"pass", t.pass}, {"lhs", t.lhs}, {"rhs", t.rhs}, {"slack", t.slack}};
}

Json to_json(const qmodel::PartyMoments& m) {
    return {{"means", m.mean},
            {"variances", m.var},
            {"eta", m.eta},
            {"nu", m.nu},
            {"r_q", {{"re", m.r_q.real()}, {"im", m.r_q.imag()}}}};
}

Json to_json(const qmodel::QuantumMoments& m) {
    return {{"alice", to_json(m.alice)},
            {"bob", to_json(m.bob)},
            {"correlators", m.correlator},
            {"cov", m.cov},
            {"pearson", m.pearson},
            {"chsh", m.chsh()}};
}

std::string classification(const ri::Verdict& v) {
    if (v.local.value_or(false)) return "local";
    if (v.quantum_compatible && v.ri_feasible) return "quantum_compatible";
    if (v.ri_feasible) return "ri_feasible";
    return "infeasible";
}

}  // namespace bellri::io
