#ifndef SACERT_JSON_IO_HPP
#define SACERT_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "sacert/bench.hpp"
#include "sacert/certifier.hpp"
#include "sacert/csp.hpp"
#include "sacert/feaspoint.hpp"
#include "sacert/graph.hpp"
#include "sacert/spider.hpp"

namespace sacert {

// Graph wire format: {"n": int, "edges": [[u, v, mult, sign], ...]},
// 0-indexed vertices.
nlohmann::json graph_to_json(const SignedGraph& g);
SignedGraph graph_from_json(const nlohmann::json& j);

// Instance wire format: {"n", "k", "terms": [[key, w], ...]} for XOR and
// {"n", "k", "predicate": "0110...", "clauses": [{"scope", "negations"}]} for
// predicate CSPs; "seed" is carried through when present.
nlohmann::json xor_to_json(const XorInstance& inst);
XorInstance xor_from_json(const nlohmann::json& j);
nlohmann::json csp_to_json(const CspInstance& inst);
CspInstance csp_from_json(const nlohmann::json& j);

// One of graph / XOR instance / CSP instance, sniffed by fields.
enum class InputKind { Graph, Xor, Csp };
InputKind sniff_input(const nlohmann::json& j);

nlohmann::json certificate_to_json(const Certificate& cert);
nlohmann::json verification_to_json(const VerificationReport& rep);
nlohmann::json psi_report_to_json(const PsiReport& rep);
nlohmann::json refutation_to_json(const RefutationReport& rep);
nlohmann::json predicate_report_to_json(const PredicateReport& rep);
nlohmann::json embed_report_to_json(const EmbedReport& rep);
nlohmann::json weight_stats_to_json(const WeightStats& s);
nlohmann::json experiment_to_json(const Experiment& e);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace sacert

#endif
