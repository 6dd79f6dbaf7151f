// sacert: spectral walk certificates and refutations for 2-XOR / max-cut /
// predicate CSPs, with a feasible-point lower bound and a benchmark harness.
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>

#include "sacert/bench.hpp"
#include "sacert/certifier.hpp"
#include "sacert/csp.hpp"
#include "sacert/feaspoint.hpp"
#include "sacert/json_io.hpp"
#include "sacert/rng.hpp"
#include "sacert/spider.hpp"

namespace {

using nlohmann::json;
using namespace sacert;

struct Common {
    bool no_meta = false;
    std::string format = "json";
};

void emit(const json& result, const Common& c) {
    json out = result;
    if (!c.no_meta) {
        out["meta"] = {{"tool", "sacert"},
                       {"version", "0.1.0"},
                       {"generated_at", static_cast<std::uint64_t>(time(nullptr))}};
    }
    std::cout << out.dump(2) << '\n';
}

XorInstance pairs_from_input(const json& j) {
    // lowerbound accepts either an arity-2 instance or a unit graph
    if (sniff_input(j) == InputKind::Xor) return xor_from_json(j);
    SignedGraph g = graph_from_json(j);
    XorInstance inst;
    inst.n = g.n();
    inst.k = 2;
    for (const auto& e : g.edges()) {
        if (e.mult != 1 || e.u == e.v)
            throw std::invalid_argument("lower bound needs a simple unit graph");
        inst.add_term(static_cast<std::uint64_t>(e.u) +
                          static_cast<std::uint64_t>(e.v) * g.n(),
                      e.sign);
    }
    return inst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral certificates for 2-XOR, max-cut and predicate CSPs"};
    app.require_subcommand(1);
    app.fallthrough();  // allow --no-meta/--format after the subcommand

    Common common;
    app.add_flag("--no-meta", common.no_meta,
                 "omit the meta block (byte-stable output)");
    app.add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a graph or instance");
    std::string g_type, g_pred, g_output;
    int g_n = 0, g_k = 2;
    double g_param = 3.0, g_p = 0.1, g_m = 0;
    std::uint64_t g_seed = 0;
    bool g_simple = false;
    gen->add_option("--type", g_type, "gnp|regular|complete|cycle|xor|csp")
        ->required()
        ->check(CLI::IsMember({"gnp", "regular", "complete", "cycle", "xor", "csp"}));
    gen->add_option("--n", g_n, "vertex/variable count")->required();
    gen->add_option("--param", g_param, "degree (regular) or average degree (gnp)");
    gen->add_option("--k", g_k, "XOR/CSP arity");
    gen->add_option("--p", g_p, "per-key weight probability (xor)");
    gen->add_option("--m", g_m, "expected clause count (csp)");
    gen->add_option("--predicate", g_pred, "truth table bitstring, LSB-first (csp)");
    gen->add_option("--seed", g_seed, "64-bit seed");
    gen->add_flag("--simple", g_simple, "retry the pairing model until simple");
    gen->add_option("--output", g_output, "write JSON here instead of stdout");

    // ---- certify ----
    auto* certify = app.add_subcommand("certify", "build a walk certificate");
    std::string c_input, c_kind = "maxcut", c_verify = "none";
    double c_eps = 0;
    int c_k = 0, c_ell = 0, c_jobs = 1;
    std::uint64_t c_samples = 200000, c_seed = 0;
    certify->add_option("--input", c_input)->required();
    certify->add_option("--kind", c_kind)->check(CLI::IsMember({"maxcut", "2xor"}));
    certify->add_option("--epsilon", c_eps, "target strength (selects k, ell)");
    certify->add_option("--k", c_k, "explicit spider width");
    certify->add_option("--ell", c_ell, "explicit spider depth");
    certify->add_option("--verify", c_verify)
        ->check(CLI::IsMember({"none", "exhaustive", "sampled"}));
    certify->add_option("--samples", c_samples);
    certify->add_option("--jobs", c_jobs);
    certify->add_option("--seed", c_seed);

    // ---- verify-cert ----
    auto* vcert = app.add_subcommand("verify-cert",
                                     "rebuild a certificate and check its identities");
    std::string v_input, v_kind = "maxcut", v_mode = "exhaustive";
    int v_k = 0, v_ell = 0, v_jobs = 1;
    std::uint64_t v_samples = 200000, v_seed = 0;
    vcert->add_option("--input", v_input)->required();
    vcert->add_option("--kind", v_kind)->check(CLI::IsMember({"maxcut", "2xor"}));
    vcert->add_option("--k", v_k)->required();
    vcert->add_option("--ell", v_ell)->required();
    vcert->add_option("--mode", v_mode)
        ->check(CLI::IsMember({"exhaustive", "sampled"}));
    vcert->add_option("--samples", v_samples);
    vcert->add_option("--jobs", v_jobs);
    vcert->add_option("--seed", v_seed);

    // ---- refute-xor ----
    auto* rxor = app.add_subcommand("refute-xor", "refute a k-XOR instance");
    std::string rx_input;
    double rx_eps = 0.25;
    std::uint64_t rx_seed = 0;
    rxor->add_option("--input", rx_input)->required();
    rxor->add_option("--epsilon", rx_eps);
    rxor->add_option("--seed", rx_seed);

    // ---- refute-csp ----
    auto* rcsp = app.add_subcommand("refute-csp", "refute a predicate CSP");
    std::string rc_input;
    double rc_eps = 0.25, rc_delta = 0.01;
    std::uint64_t rc_seed = 0;
    rcsp->add_option("--input", rc_input)->required();
    rcsp->add_option("--epsilon", rc_eps);
    rcsp->add_option("--delta", rc_delta);
    rcsp->add_option("--seed", rc_seed);

    // ---- lowerbound ----
    auto* lb = app.add_subcommand("lowerbound",
                                  "feasible-point value no R-round LP can beat");
    std::string lb_input;
    int lb_rounds = 1;
    std::uint64_t lb_seed = 0;
    lb->add_option("--input", lb_input)->required();
    lb->add_option("--rounds", lb_rounds)->check(CLI::PositiveNumber);
    lb->add_option("--seed", lb_seed);

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "experiment harness");
    ExperimentConfig bc;
    bc.generator = "regular";
    bc.n = 20;
    bc.param = 6;
    bc.epsilon = 0.3;
    int b_seeds = 1;
    std::uint64_t b_seed = 0;
    bench->add_option("--generator", bc.generator)
        ->check(CLI::IsMember({"regular", "gnp", "complete", "cycle"}));
    bench->add_option("--n", bc.n);
    bench->add_option("--param", bc.param);
    bench->add_option("--kind", bc.kind)->check(CLI::IsMember({"maxcut", "2xor"}));
    bench->add_option("--epsilon", bc.epsilon);
    bench->add_option("--k", bc.k);
    bench->add_option("--ell", bc.ell);
    bench->add_flag("--simple", bc.simple);
    bench->add_option("--seeds", b_seeds, "number of seeded runs");
    bench->add_option("--seed", b_seed, "base seed");

    // ---- spider-check ----
    auto* spc = app.add_subcommand("spider-check", "spider matrix identities");
    int s_k = 0, s_ell = 0;
    double s_alpha = 0;
    spc->add_option("--k", s_k)->required();
    spc->add_option("--ell", s_ell)->required();
    spc->add_option("--alpha", s_alpha, "defaults to k^{1/2ell}");

    // ---- selftest ----
    auto* self = app.add_subcommand("selftest",
                                    "exhaustive tiny-fixture identity suites");
    int st_jobs = 1;
    self->add_option("--jobs", st_jobs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            json out;
            if (g_type == "xor") {
                WeightSpec ws;
                ws.p = g_p;
                XorInstance inst = gen_weighted_xor(g_n, g_k, ws, g_seed);
                out = xor_to_json(inst);
            } else if (g_type == "csp") {
                std::vector<int> tt;
                for (char ch : g_pred) {
                    if (ch != '0' && ch != '1')
                        throw CLI::ValidationError("--predicate must be a 0/1 string");
                    tt.push_back(ch == '1');
                }
                if (g_m <= 0) throw CLI::ValidationError("--m required for csp");
                out = csp_to_json(gen_csp(g_n, g_k, tt, g_m, g_seed));
            } else {
                SignedGraph g = [&] {
                    if (g_type == "gnp") return gen_gnp(g_n, g_param, g_seed);
                    if (g_type == "complete") return make_complete(g_n);
                    if (g_type == "cycle") return make_cycle(g_n);
                    std::string warn;
                    SignedGraph r = gen_regular(g_n, static_cast<int>(g_param),
                                                g_seed, g_simple, &warn);
                    if (!warn.empty()) std::cerr << "warning: " << warn << '\n';
                    return r;
                }();
                out = graph_to_json(g);
            }
            out["seed"] = g_seed;
            if (g_output.empty())
                emit(out, common);
            else
                save_json_file(g_output, out);
            return 0;
        }

        if (*certify) {
            SignedGraph g = graph_from_json(load_json_file(c_input));
            bool maxcut = c_kind == "maxcut";
            Certificate cert =
                c_k > 0 ? (maxcut ? certify_maxcut(g, c_k, c_ell)
                                  : certify_2xor(g, c_k, c_ell))
                        : (maxcut ? certify_maxcut(g, c_eps)
                                  : certify_2xor(g, c_eps));
            json out{{"certificate", certificate_to_json(cert)}};
            bool ok = true;
            if (c_verify != "none") {
                VerifyMode mode = c_verify == "exhaustive" ? VerifyMode::Exhaustive
                                                           : VerifyMode::Sampled;
                VerificationReport rep = verify_certificate(
                    cert, g, mode, c_samples, c_seed, c_jobs);
                out["verification"] = verification_to_json(rep);
                ok = rep.pass;
            }
            emit(out, common);
            return ok ? 0 : 1;
        }

        if (*vcert) {
            SignedGraph g = graph_from_json(load_json_file(v_input));
            bool maxcut = v_kind == "maxcut";
            Certificate cert = maxcut ? certify_maxcut(g, v_k, v_ell)
                                      : certify_2xor(g, v_k, v_ell);
            VerifyMode mode = v_mode == "exhaustive" ? VerifyMode::Exhaustive
                                                     : VerifyMode::Sampled;
            VerificationReport rep =
                verify_certificate(cert, g, mode, v_samples, v_seed, v_jobs);
            emit({{"certificate", certificate_to_json(cert)},
                  {"verification", verification_to_json(rep)}},
                 common);
            return rep.pass ? 0 : 1;
        }

        if (*rxor) {
            XorInstance inst = xor_from_json(load_json_file(rx_input));
            RefutationReport rep = refute_xor(inst, rx_eps, rx_seed);
            emit(refutation_to_json(rep), common);
            return rep.refuted ? 0 : 1;
        }

        if (*rcsp) {
            CspInstance inst = csp_from_json(load_json_file(rc_input));
            PredicateReport rep = refute_predicate(inst, rc_eps, rc_delta, rc_seed);
            emit(predicate_report_to_json(rep), common);
            return rep.refuted ? 0 : 1;
        }

        if (*lb) {
            XorInstance inst = pairs_from_input(load_json_file(lb_input));
            PseudoMoments pm = cmm_point(inst, lb_rounds);
            double value = feasible_value(inst, pm);
            EmbedReport rep = check_embeddability(inst, lb_rounds, lb_seed);
            emit({{"rounds", lb_rounds},
                  {"r", pm.r},
                  {"feasible_value", value},
                  {"floor", 0.5 + (2.0 / 3.141592653589793) / (2.0 * pm.r)},
                  {"embeddability", embed_report_to_json(rep)}},
                 common);
            return rep.pass ? 0 : 1;
        }

        if (*bench) {
            bool sound = true;
            json rows = json::array();
            if (common.format == "csv")
                std::cout << experiment_csv_header() << '\n';
            for (int s = 0; s < b_seeds; ++s) {
                ExperimentConfig cfg = bc;
                cfg.seed = derive_seed(b_seed, static_cast<std::uint64_t>(s));
                Experiment ex = run_experiment(cfg);
                sound = sound && ex.soundness_ok;
                if (common.format == "csv")
                    std::cout << to_csv(ex) << '\n';
                else
                    rows.push_back(experiment_to_json(ex));
            }
            if (common.format != "csv") emit({{"experiments", rows}}, common);
            return sound ? 0 : 1;
        }

        if (*spc) {
            Spider sp = build_spider(s_k, s_ell);
            double alpha = s_alpha > 0
                               ? s_alpha
                               : std::exp(std::log(static_cast<double>(s_k)) /
                                          (2.0 * s_ell));
            SpiderMatrix sm = build_psi(sp, alpha);
            PsiReport rep = verify_psi(sm);
            json named{{"d0", sm.inner[0]},
                       {"d1", sm.inner[1]},
                       {"d_2ell", sm.inner[2 * s_ell]}};
            double intermediate = 0;
            for (int d = 2; d < 2 * s_ell; ++d)
                intermediate = std::fmax(intermediate, std::fabs(sm.inner[d]));
            named["intermediate_max_abs"] = intermediate;
            emit({{"k", s_k},
                  {"ell", s_ell},
                  {"alpha", alpha},
                  {"inner_products", named},
                  {"report", psi_report_to_json(rep)}},
                 common);
            return rep.pass ? 0 : 1;
        }

        if (*self) {
            bool all_ok = true;
            json results = json::array();

            // spider identity suite
            for (auto [k, ell] : {std::pair{3, 1}, {4, 1}, {9, 2}, {16, 2}}) {
                double alpha =
                    std::exp(std::log(static_cast<double>(k)) / (2.0 * ell));
                PsiReport rep = verify_psi(build_psi(build_spider(k, ell), alpha));
                all_ok = all_ok && rep.pass;
                results.push_back({{"suite", "spider"},
                                   {"k", k},
                                   {"ell", ell},
                                   {"pass", rep.pass}});
            }

            // exhaustive aggregation identity on tiny fixtures
            std::vector<std::pair<std::string, SignedGraph>> graphs;
            graphs.emplace_back("K3", make_complete(3));
            graphs.emplace_back("P4", make_path(4));
            graphs.emplace_back("C5", make_cycle(5));
            {
                std::vector<SignedEdge> e{{0, 1, 1, 1},
                                          {1, 2, 1, -1},
                                          {2, 3, 1, 1},
                                          {3, 0, 1, -1}};
                graphs.emplace_back("signedC4", SignedGraph::build(4, e));
            }
            for (const auto& [name, g] : graphs)
                for (auto [k, ell] : {std::pair{2, 1}, {3, 1}, {2, 2}}) {
                    Certificate cert =
                        build_certificate(g, CertKind::TwoXor, k, ell);
                    VerificationReport rep =
                        verify_certificate(cert, g, VerifyMode::Exhaustive);
                    all_ok = all_ok && rep.pass;
                    results.push_back({{"suite", "aggregation"},
                                       {"graph", name},
                                       {"k", k},
                                       {"ell", ell},
                                       {"residual", rep.aggregation_residual},
                                       {"pass", rep.pass}});
                }

            // f identity suite
            {
                std::vector<double> grid;
                for (int i = -1000; i <= 1000; ++i) grid.push_back(i / 1000.0);
                FReport rep = f_properties(grid);
                all_ok = all_ok && rep.pass;
                results.push_back({{"suite", "f"}, {"pass", rep.pass}});
            }

            emit({{"pass", all_ok}, {"results", results}}, common);
            return all_ok ? 0 : 1;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
