#include "sacert/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sacert/feaspoint.hpp"
#include "sacert/rng.hpp"

namespace sacert {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

BruteResult make_fraction(long long num, long long den, std::uint64_t best) {
    BruteResult r;
    long long g = std::gcd(std::llabs(num), den);
    if (g == 0) g = 1;
    r.num = num / g;
    r.den = den / g;
    r.value = static_cast<double>(num) / den;
    r.best_assignment = best;
    return r;
}

}  // namespace

SignedGraph make_complete(int n) {
    std::vector<SignedEdge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v, 1, -1});
    return SignedGraph::build(n, edges);
}

SignedGraph make_cycle(int n) {
    if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
    std::vector<SignedEdge> edges;
    for (int u = 0; u < n; ++u) edges.push_back({u, (u + 1) % n, 1, -1});
    return SignedGraph::build(n, edges);
}

SignedGraph make_path(int n) {
    if (n < 2) throw std::invalid_argument("path needs n >= 2");
    std::vector<SignedEdge> edges;
    for (int u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1, 1, -1});
    return SignedGraph::build(n, edges);
}

SignedGraph gen_gnp(int n, double avg_degree, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gnp needs n >= 2");
    double p = std::fmin(1.0, avg_degree / (n - 1));
    std::mt19937_64 rng = make_rng(seed);
    std::bernoulli_distribution coin(p);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<SignedEdge> edges;
        std::vector<int> deg(n, 0);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (coin(rng)) {
                    edges.push_back({u, v, 1, -1});
                    ++deg[u];
                    ++deg[v];
                }
        if (std::all_of(deg.begin(), deg.end(), [](int d) { return d > 0; }))
            return SignedGraph::build(n, edges);
    }
    throw std::runtime_error("gnp kept producing isolated vertices");
}

SignedGraph gen_regular(int n, int delta, std::uint64_t seed, bool simple,
                        std::string* warning, int retry_cap) {
    if (n < 2 || delta < 1) throw std::invalid_argument("bad regular parameters");
    if ((static_cast<long long>(n) * delta) % 2 != 0)
        throw std::invalid_argument("n * Delta must be even");
    std::mt19937_64 rng = make_rng(seed);

    auto pair_up = [&]() {
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * delta);
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < delta; ++i) stubs.push_back(v);
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::vector<SignedEdge> edges;
        for (std::size_t i = 0; i < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            // self-pair: loop of multiplicity 2, preserving degree Delta
            if (u == v)
                edges.push_back({u, u, 2, -1});
            else
                edges.push_back({u, v, 1, -1});
        }
        return SignedGraph::build(n, edges);
    };

    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        SignedGraph g = pair_up();
        if (!simple) return g;
        bool ok = true;
        for (const auto& e : g.edges())
            if (e.u == e.v || e.mult != 1) ok = false;
        if (ok) return g;
    }
    if (warning)
        *warning = "simple-graph retry cap exceeded; returning a multigraph";
    return pair_up();
}

BruteResult brute_optimum(const SignedGraph& g) {
    const int n = g.n();
    if (n > 26) throw std::invalid_argument("brute force capped at n = 26");
    const long long two_m = std::llround(g.two_m());

    long long loop_const = 0;
    std::vector<std::vector<std::pair<int, long long>>> adj(n);  // v -> (u, m*s)
    for (const auto& e : g.edges()) {
        long long ws = e.mult * e.sign;
        if (e.u == e.v) {
            loop_const += ws;
        } else {
            adj[e.u].push_back({e.v, ws});
            adj[e.v].push_back({e.u, ws});
        }
    }

    std::vector<int> x(n, 1);
    long long s = 0;
    for (const auto& e : g.edges())
        if (e.u != e.v) s += e.mult * e.sign;

    long long best = s;
    std::uint64_t best_gray = 0;
    const std::uint64_t total = 1ull << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        std::uint64_t gray = i ^ (i >> 1);
        int v = std::countr_zero(gray ^ ((i - 1) ^ ((i - 1) >> 1)));
        x[v] = -x[v];
        long long delta = 0;
        for (const auto& [u, ws] : adj[v]) delta += ws * x[u];
        s += 2 * delta * x[v];
        if (s > best) {
            best = s;
            best_gray = gray;
        }
    }
    // obj = 1/2 + (S + L/2) / two_m
    return make_fraction(two_m + 2 * best + loop_const, 2 * two_m, best_gray);
}

BruteResult brute_optimum(const XorInstance& inst) {
    const int n = inst.n;
    if (n > 26) throw std::invalid_argument("brute force capped at n = 26");
    if (inst.terms.empty()) throw std::invalid_argument("empty instance");

    std::vector<long long> w;
    std::vector<int> prod;
    std::vector<std::vector<int>> incident(n);  // variable -> odd-degree terms
    for (const auto& [key, weight] : inst.terms) {
        std::vector<int> counts(n, 0);
        std::uint64_t rem = key;
        for (int i = 0; i < inst.k; ++i) {
            ++counts[rem % inst.n];
            rem /= inst.n;
        }
        int idx = static_cast<int>(w.size());
        w.push_back(weight);
        prod.push_back(1);
        for (int v = 0; v < n; ++v)
            if (counts[v] % 2 == 1) incident[v].push_back(idx);
    }

    long long raw = std::accumulate(w.begin(), w.end(), 0ll);
    long long best = raw;
    std::uint64_t best_gray = 0;
    const std::uint64_t total = 1ull << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        std::uint64_t gray = i ^ (i >> 1);
        int v = std::countr_zero(gray ^ ((i - 1) ^ ((i - 1) >> 1)));
        for (int t : incident[v]) {
            raw -= 2 * w[t] * prod[t];
            prod[t] = -prod[t];
        }
        if (raw > best) {
            best = raw;
            best_gray = gray;
        }
    }
    long long m = inst.m_abs();
    return make_fraction(m + best, 2 * m, best_gray);
}

BruteResult brute_optimum(const CspInstance& inst) {
    const int n = inst.n;
    if (n > 26) throw std::invalid_argument("brute force capped at n = 26");
    if (inst.clauses.empty()) throw std::invalid_argument("empty instance");
    const int m = static_cast<int>(inst.clauses.size());

    std::vector<std::vector<int>> incident(n);
    for (int c = 0; c < m; ++c) {
        std::vector<bool> seen(n, false);
        std::uint64_t rem = inst.clauses[c].scope;
        for (int i = 0; i < inst.k; ++i) {
            seen[rem % inst.n] = true;
            rem /= inst.n;
        }
        for (int v = 0; v < n; ++v)
            if (seen[v]) incident[v].push_back(c);
    }

    std::vector<int> x(n, 1);
    std::vector<int> sat(m);
    long long total_sat = 0;
    for (int c = 0; c < m; ++c) {
        sat[c] = inst.eval_clause(inst.clauses[c], x);
        total_sat += sat[c];
    }
    long long best = total_sat;
    std::uint64_t best_gray = 0;
    const std::uint64_t total = 1ull << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        std::uint64_t gray = i ^ (i >> 1);
        int v = std::countr_zero(gray ^ ((i - 1) ^ ((i - 1) >> 1)));
        x[v] = -x[v];
        for (int c : incident[v]) {
            int now = inst.eval_clause(inst.clauses[c], x);
            total_sat += now - sat[c];
            sat[c] = now;
        }
        if (total_sat > best) {
            best = total_sat;
            best_gray = gray;
        }
    }
    return make_fraction(best, m, best_gray);
}

EigBounds eig_bounds(const SignedGraph& g) {
    const int n = g.n();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges()) {
        if (e.u == e.v) {
            A(e.u, e.u) += static_cast<double>(e.mult);
        } else {
            A(e.u, e.v) += static_cast<double>(e.mult);
            A(e.v, e.u) += static_cast<double>(e.mult);
        }
    }
    Eigen::VectorXd d(n);
    for (int v = 0; v < n; ++v) d[v] = static_cast<double>(g.deg()[v]);

    EigBounds b;
    {
        Eigen::MatrixXd L = d.asDiagonal().toDenseMatrix() - A;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L, Eigen::EigenvaluesOnly);
        b.laplacian_bound = n / (2.0 * g.two_m()) * es.eigenvalues().maxCoeff();
    }
    {
        // lambda_min(K) via the pi-symmetrization D^{-1/2} A D^{-1/2}
        Eigen::VectorXd dinv_sqrt = d.cwiseSqrt().cwiseInverse();
        Eigen::MatrixXd S = dinv_sqrt.asDiagonal() * A * dinv_sqrt.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
        b.walk_bound = 0.5 - 0.5 * es.eigenvalues().minCoeff();
    }
    return b;
}

Experiment run_experiment(const ExperimentConfig& config) {
    Experiment ex;
    ex.config = config;
    std::mt19937_64 rng = make_rng(derive_seed(config.seed, 0xbe9c));

    std::optional<SignedGraph> gopt;
    try {
        gopt = [&] {
        auto t0 = std::chrono::steady_clock::now();
        SignedGraph base = [&] {
            if (config.generator == "regular") {
                std::string warn;
                SignedGraph r = gen_regular(config.n, static_cast<int>(config.param),
                                            config.seed, config.simple, &warn);
                if (!warn.empty()) ex.error = warn;
                return r;
            }
            if (config.generator == "gnp")
                return gen_gnp(config.n, config.param, config.seed);
            if (config.generator == "complete") return make_complete(config.n);
            if (config.generator == "cycle") return make_cycle(config.n);
            throw std::invalid_argument("unknown generator: " + config.generator);
        }();
        if (config.kind == "2xor") {
            std::bernoulli_distribution coin(0.5);
            std::vector<SignedEdge> edges = base.edges();
            for (auto& e : edges) e.sign = coin(rng) ? 1 : -1;
            base = SignedGraph::build(base.n(), edges);
        }
        ex.gen_ms = ms_since(t0);
        return base;
        }();
    } catch (const std::exception& e) {
        ex.error = ex.error.empty() ? e.what() : ex.error + "; " + e.what();
        return ex;
    }
    const SignedGraph& g = *gopt;

    ex.pi_star = g.pi_star();
    ex.d_min = *std::min_element(g.deg().begin(), g.deg().end());
    ex.m = std::llround(g.two_m() / 2);
    ex.eig = eig_bounds(g);

    const bool maxcut = config.kind != "2xor";
    try {
        auto t0 = std::chrono::steady_clock::now();
        Certificate cert =
            config.k > 0
                ? (maxcut ? certify_maxcut(g, static_cast<int>(config.k), config.ell)
                          : certify_2xor(g, static_cast<int>(config.k), config.ell))
                : (maxcut ? certify_maxcut(g, config.epsilon)
                          : certify_2xor(g, config.epsilon));
        ex.cert_ms = ms_since(t0);
        ex.rho = cert.rho;
        ex.cert_bound = cert.bound_obj;
        ex.cert_bound_sharp = cert.bound_obj_sharp;
        ex.cert_vacuous = cert.vacuous;
    } catch (const std::exception& e) {
        ex.error = ex.error.empty() ? e.what() : ex.error + "; " + e.what();
        WalkOperator w = WalkOperator::build(g);
        ex.rho = spectral_radius(maxcut ? w.Kprime : w.Kbar, g.pi());
    }

    if (g.n() <= config.brute_cap) {
        auto t0 = std::chrono::steady_clock::now();
        ex.optimum = brute_optimum(g).value;
        ex.brute_ms = ms_since(t0);
        if (ex.cert_bound > 0 && *ex.optimum > ex.cert_bound + 1e-9)
            ex.soundness_ok = false;
        if (maxcut && *ex.optimum > ex.eig.walk_bound + 1e-9)
            ex.soundness_ok = false;
    }

    // R = 1 feasible point needs unit pairwise constraints (simple, loop-free)
    bool unit = std::all_of(g.edges().begin(), g.edges().end(), [](const SignedEdge& e) {
        return e.u != e.v && e.mult == 1;
    });
    if (unit) {
        XorInstance pairs;
        pairs.n = g.n();
        pairs.k = 2;
        for (const auto& e : g.edges())
            pairs.add_term(static_cast<std::uint64_t>(e.u) +
                               static_cast<std::uint64_t>(e.v) * g.n(),
                           e.sign);
        try {
            PseudoMoments pm = cmm_point(pairs, 1);
            ex.feas_value = feasible_value(pairs, pm);
        } catch (...) {
        }
    }

    return ex;
}

std::string experiment_csv_header() {
    return "generator,n,param,kind,epsilon,k,ell,seed,rho,pi_star,d_min,m,"
           "eig_laplacian,eig_walk,cert_bound,cert_bound_sharp,cert_vacuous,"
           "optimum,feas_value,gen_ms,cert_ms,brute_ms,soundness_ok,error";
}

std::string to_csv(const Experiment& e) {
    std::ostringstream os;
    os.precision(12);
    os << e.config.generator << ',' << e.config.n << ',' << e.config.param << ','
       << e.config.kind << ',' << e.config.epsilon << ',' << e.config.k << ','
       << e.config.ell << ',' << e.config.seed << ',' << e.rho << ','
       << e.pi_star << ',' << e.d_min << ',' << e.m << ','
       << e.eig.laplacian_bound << ',' << e.eig.walk_bound << ','
       << e.cert_bound << ',' << e.cert_bound_sharp << ','
       << (e.cert_vacuous ? 1 : 0) << ',';
    if (e.optimum) os << *e.optimum;
    os << ',';
    if (e.feas_value) os << *e.feas_value;
    os << ',' << e.gen_ms << ',' << e.cert_ms << ',' << e.brute_ms << ','
       << (e.soundness_ok ? 1 : 0) << ',' << '"' << e.error << '"';
    return os.str();
}

}  // namespace sacert
