#pragma once

// JSON schemas for the command-line front end.
//
// Bipartite tables accept one of
//   {"fixture": "pr-box" | "tsirelson" | "zero" | "uniform"}
//   {"probabilities": {"outcomes_a": [..], "outcomes_b": [..], "p": [[P00, P01], [P10, P11]]}}
//       with P_ij a nested [a][b] array
//   {"pearson": [[..], [..]], "variances": {"a": [..], "b": [..]}, "means": {"a": [..], "b": [..]}}
//   {"correlators": [[..], [..]]}            raw +-1 correlators with zero means
//   {"weights": [16 numbers]}                LHV ensemble
// Observables are "X", "Y", "Z", "I", {"bloch": [x, y, z]} or {"re": [[..]], "im": [[..]]}.

#include <string>

#include "json.hpp"

#include "bellri/correlators.hpp"
#include "bellri/lhv.hpp"
#include "bellri/multiparty.hpp"
#include "bellri/qmodel.hpp"
#include "bellri/ri.hpp"

namespace bellri::io {

using Json = nlohmann::json;

/// Parse text; syntax errors become MalformedInput with line/column.
Json parse_text(const std::string& text);

ProbabilityTable parse_probability_table(const Json& j);
CorrelatorTable parse_correlator_table(const Json& j);
lhv::LhvEnsemble parse_ensemble(const Json& j);
qmodel::Observable parse_observable(const Json& j, const std::string& field);
/// {"dims": [..], "state": {"re": [..], "im": [..]} | "density": {"re": [[..]], "im": [[..]]},
///  "alice_obs": [o, o], "bob_obs": [o, o], "charlie_obs": [o, o] (optional)}
qmodel::QuantumScenario parse_scenario(const Json& j);
/// {"ab": [[..]], "ac": [[..]], "bc": [[..]]}
TripartiteCorrelatorTable parse_tripartite(const Json& j);
/// {"experimenters": [{"first": [r0, r1], "second": [r0, r1]}, ..], "r_prime": x}
multiparty::NPartyCorrelators parse_nparty(const Json& j);

Json to_json(const CorrelatorTable& ct);
Json to_json(const ri::RInterval& iv);
Json to_json(const ri::Verdict& v);
Json to_json(const ri::TlmResult& t);
Json to_json(const qmodel::PartyMoments& m);
Json to_json(const qmodel::QuantumMoments& m);

std::string classification(const ri::Verdict& v);

}  // namespace bellri::io
