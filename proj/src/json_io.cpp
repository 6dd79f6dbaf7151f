#include "sacert/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace sacert {

using nlohmann::json;

json graph_to_json(const SignedGraph& g) {
    json edges = json::array();
    for (const auto& e : g.edges())
        edges.push_back({e.u, e.v, e.mult, e.sign});
    return {{"n", g.n()}, {"edges", edges}};
}

SignedGraph graph_from_json(const json& j) {
    if (!j.contains("n") || !j.contains("edges"))
        throw std::invalid_argument("graph JSON needs 'n' and 'edges'");
    std::vector<SignedEdge> edges;
    for (const auto& row : j.at("edges")) {
        if (!row.is_array() || row.size() != 4)
            throw std::invalid_argument("edge rows are [u, v, mult, sign]");
        edges.push_back({row[0].get<int>(), row[1].get<int>(),
                         row[2].get<long long>(), row[3].get<int>()});
    }
    return SignedGraph::build(j.at("n").get<int>(), edges);
}

json xor_to_json(const XorInstance& inst) {
    json terms = json::array();
    for (const auto& [key, w] : inst.terms) terms.push_back({key, w});
    return {{"n", inst.n}, {"k", inst.k}, {"terms", terms}};
}

XorInstance xor_from_json(const json& j) {
    XorInstance inst;
    inst.n = j.at("n").get<int>();
    inst.k = j.at("k").get<int>();
    for (const auto& row : j.at("terms")) {
        if (!row.is_array() || row.size() != 2)
            throw std::invalid_argument("term rows are [key, weight]");
        inst.add_term(row[0].get<std::uint64_t>(), row[1].get<long long>());
    }
    return inst;
}

json csp_to_json(const CspInstance& inst) {
    std::string pred;
    for (int b : inst.predicate) pred += (b ? '1' : '0');
    json clauses = json::array();
    for (const auto& c : inst.clauses)
        clauses.push_back({{"scope", c.scope}, {"negations", c.negations}});
    return {{"n", inst.n},
            {"k", inst.k},
            {"predicate", pred},
            {"clauses", clauses},
            {"p", inst.p}};
}

CspInstance csp_from_json(const json& j) {
    CspInstance inst;
    inst.n = j.at("n").get<int>();
    inst.k = j.at("k").get<int>();
    std::string pred = j.at("predicate").get<std::string>();
    if (pred.size() != (1u << inst.k))
        throw std::invalid_argument("predicate bitstring must have length 2^k");
    for (char c : pred) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("predicate bitstring must be 0/1");
        inst.predicate.push_back(c == '1');
    }
    for (const auto& c : j.at("clauses")) {
        CspInstance::Clause cl;
        cl.scope = c.at("scope").get<std::uint64_t>();
        cl.negations = c.at("negations").get<std::vector<int>>();
        if (static_cast<int>(cl.negations.size()) != inst.k)
            throw std::invalid_argument("negation vector must have length k");
        inst.clauses.push_back(std::move(cl));
    }
    inst.p = j.value("p", 0.0);
    return inst;
}

InputKind sniff_input(const json& j) {
    if (j.contains("edges")) return InputKind::Graph;
    if (j.contains("predicate")) return InputKind::Csp;
    if (j.contains("terms")) return InputKind::Xor;
    throw std::invalid_argument("unrecognized input JSON");
}

json certificate_to_json(const Certificate& cert) {
    json j{{"kind", cert.kind == CertKind::MaxCut ? "maxcut" : "2xor"},
           {"k", cert.k},
           {"ell", cert.ell},
           {"locality", cert.locality},
           {"alpha", cert.alpha},
           {"c0", cert.c0},
           {"rho", cert.rho},
           {"pi_star", cert.pi_star},
           {"beta_paper", cert.beta_paper},
           {"beta_sharp", cert.beta_sharp},
           {"bound", cert.bound_obj},
           {"bound_sharp", cert.bound_obj_sharp},
           {"vacuous", cert.vacuous}};
    if (cert.kind == CertKind::MaxCut) {
        j["theta"] = cert.theta;
        j["iota"] = cert.iota;
    }
    j["psi_materialized"] = cert.psi.has_value();
    return j;
}

json verification_to_json(const VerificationReport& rep) {
    return {{"psi_psd", rep.psi_psd},
            {"psi_min_eigenvalue", rep.psi_min_eigenvalue},
            {"aggregation_residual", rep.aggregation_residual},
            {"aggregation_tolerance", rep.aggregation_tolerance},
            {"aggregation_ok", rep.aggregation_ok},
            {"wack_domination_min_eig", rep.wack_domination_min_eig},
            {"wack_square_residual", rep.wack_square_residual},
            {"wack_row_margin", rep.wack_row_margin},
            {"wack_ok", rep.wack_ok},
            {"beta_chain_residual", rep.beta_chain_residual},
            {"beta_chain_ok", rep.beta_chain_ok},
            {"theta_residual", rep.theta_residual},
            {"kj_identity_residual", rep.kj_identity_residual},
            {"maxcut_bookkeeping_ok", rep.maxcut_bookkeeping_ok},
            {"samples_used", rep.samples_used},
            {"pass", rep.pass},
            {"note", rep.note}};
}

json psi_report_to_json(const PsiReport& rep) {
    return {{"inner_product_residuals", rep.residual},
            {"min_eigenvalue", rep.min_eigenvalue},
            {"max_eigenvalue", rep.max_eigenvalue},
            {"psd_ok", rep.psd_ok},
            {"identities_ok", rep.identities_ok},
            {"corollary_applicable", rep.corollary_applicable},
            {"corollary_ok", rep.corollary_ok},
            {"pass", rep.pass}};
}

json refutation_to_json(const RefutationReport& rep) {
    json j{{"refuted", rep.refuted},
           {"epsilon", rep.epsilon},
           {"target_bound", rep.target_bound},
           {"certified_bound", rep.certified_bound},
           {"certified_bound_sharp", rep.certified_bound_sharp},
           {"rho", rep.rho},
           {"rho_formula_logN", rep.rho_formula_logN},
           {"rho_formula_logn", rep.rho_formula_logn},
           {"pi_star", rep.pi_star},
           {"d_min", rep.d_min},
           {"m_graph", rep.m_graph},
           {"ell", rep.ell},
           {"k_spider", rep.k_spider},
           {"locality", rep.locality},
           {"sa_rounds", rep.sa_rounds},
           {"n_flat", rep.n_flat},
           {"support", rep.support}};
    if (!rep.failure_reason.empty()) j["failure_reason"] = rep.failure_reason;
    if (rep.certificate) j["certificate"] = certificate_to_json(*rep.certificate);
    return j;
}

json predicate_report_to_json(const PredicateReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries) {
        json row{{"alpha", e.alpha},
                 {"m_alpha", e.m_alpha},
                 {"fourier", e.hat},
                 {"bound", e.bound},
                 {"via_l1", e.via_l1}};
        if (!e.via_l1) row["sub"] = refutation_to_json(e.sub);
        entries.push_back(std::move(row));
    }
    json j{{"refuted", rep.refuted},
           {"density", rep.e_p},
           {"bound", rep.bound},
           {"paper_form_bound", rep.paper_bound},
           {"m", rep.m},
           {"sa_rounds", rep.sa_rounds},
           {"entries", entries}};
    if (!rep.refuted) j["blocking_alpha"] = rep.blocking_alpha;
    return j;
}

json embed_report_to_json(const EmbedReport& rep) {
    return {{"r", rep.r},
            {"max_row_sum", rep.max_row_sum},
            {"automatic_ok", rep.automatic_ok},
            {"boundary", rep.boundary},
            {"subsets_checked", rep.subsets_checked},
            {"exhaustive", rep.exhaustive},
            {"min_subset_eigenvalue", rep.min_subset_eig},
            {"pass", rep.pass}};
}

json weight_stats_to_json(const WeightStats& s) {
    return {{"N", s.N},
            {"p", s.p},
            {"samples", s.samples},
            {"mean", s.mean},
            {"mean_se", s.mean_se},
            {"second_moment", s.second_moment},
            {"second_moment_se", s.second_moment_se},
            {"mean_abs", s.mean_abs},
            {"mean_abs_se", s.mean_abs_se},
            {"lower_bound_large", s.lower_bound_large},
            {"lower_bound_small", s.lower_bound_small},
            {"lower_bound_small_proof", s.lower_bound_small_proof},
            {"tail_violation_rate", s.tail_violation_rate},
            {"pass", s.pass}};
}

json experiment_to_json(const Experiment& e) {
    json j{{"generator", e.config.generator},
           {"n", e.config.n},
           {"param", e.config.param},
           {"kind", e.config.kind},
           {"epsilon", e.config.epsilon},
           {"k", e.config.k},
           {"ell", e.config.ell},
           {"seed", e.config.seed},
           {"rho", e.rho},
           {"pi_star", e.pi_star},
           {"d_min", e.d_min},
           {"m", e.m},
           {"eig_laplacian", e.eig.laplacian_bound},
           {"eig_walk", e.eig.walk_bound},
           {"cert_bound", e.cert_bound},
           {"cert_bound_sharp", e.cert_bound_sharp},
           {"cert_vacuous", e.cert_vacuous},
           {"gen_ms", e.gen_ms},
           {"cert_ms", e.cert_ms},
           {"brute_ms", e.brute_ms},
           {"soundness_ok", e.soundness_ok}};
    if (e.optimum) j["optimum"] = *e.optimum;
    if (e.feas_value) j["feas_value"] = *e.feas_value;
    if (!e.error.empty()) j["error"] = e.error;
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace sacert
