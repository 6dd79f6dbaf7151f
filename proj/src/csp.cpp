#include "sacert/csp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sacert/rng.hpp"

namespace sacert {

namespace {

std::uint64_t upow(std::uint64_t base, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

void check_key_space(int n, int k) {
    if (k * std::log2(static_cast<double>(n)) > 48.0)
        throw std::invalid_argument(
            "key space n^k exceeds 2^48; ordered multisets not enumerable");
}

}  // namespace

std::uint64_t encode_multiset(const std::vector<int>& s, int n) {
    std::uint64_t key = 0, mult = 1;
    for (int d : s) {
        key += static_cast<std::uint64_t>(d) * mult;
        mult *= n;
    }
    return key;
}

std::vector<int> decode_multiset(std::uint64_t key, int n, int k) {
    std::vector<int> s(k);
    for (int i = 0; i < k; ++i) {
        s[i] = static_cast<int>(key % n);
        key /= n;
    }
    return s;
}

long long XorInstance::m_abs() const {
    long long m = 0;
    for (const auto& [key, w] : terms) m += std::llabs(w);
    return m;
}

long long XorInstance::raw_objective(const std::vector<int>& x) const {
    long long obj = 0;
    for (const auto& [key, w] : terms) {
        int prod = 1;
        std::uint64_t rem = key;
        for (int i = 0; i < k; ++i) {
            prod *= x[rem % n];
            rem /= n;
        }
        obj += w * prod;
    }
    return obj;
}

void XorInstance::add_term(std::uint64_t key, long long w) {
    if (w == 0) return;
    auto it = terms.find(key);
    if (it == terms.end()) {
        terms[key] = w;
    } else {
        it->second += w;
        if (it->second == 0) terms.erase(it);
    }
}

int CspInstance::eval_clause(const Clause& c, const std::vector<int>& x) const {
    std::uint64_t rem = c.scope;
    std::uint32_t idx = 0;
    for (int i = 0; i < k; ++i) {
        int z = x[rem % n] * c.negations[i];
        if (z < 0) idx |= (1u << i);
        rem /= n;
    }
    return predicate[idx];
}

double CspInstance::objective(const std::vector<int>& x) const {
    if (clauses.empty()) return 0.0;
    long long sat = 0;
    for (const Clause& c : clauses) sat += eval_clause(c, x);
    return static_cast<double>(sat) / clauses.size();
}

FourierTable fourier(const std::vector<int>& truth_table) {
    std::size_t sz = truth_table.size();
    int k = 0;
    while ((1u << k) < sz) ++k;
    if ((1u << k) != sz)
        throw std::invalid_argument("truth table size must be a power of two");

    FourierTable t;
    t.k = k;
    t.numerator.assign(sz, 0);
    // hat(alpha) = 2^{-k} sum_z P(z) prod_{i in alpha} z_i; bit set in the
    // index means z_i = -1.
    for (std::uint32_t alpha = 0; alpha < sz; ++alpha) {
        long long num = 0;
        for (std::uint32_t z = 0; z < sz; ++z) {
            int chi = (__builtin_popcount(alpha & z) % 2 == 0) ? 1 : -1;
            num += static_cast<long long>(truth_table[z]) * chi;
        }
        t.numerator[alpha] = num;
    }
    return t;
}

FlattenResult flatten_even(const XorInstance& inst) {
    if (inst.k % 2 != 0)
        throw std::invalid_argument("flatten_even requires even arity");
    const int q = inst.k / 2;
    check_key_space(inst.n, inst.k);
    const std::uint64_t N = upow(inst.n, q);

    FlattenResult res;
    res.q = q;
    res.n_flat = N;
    res.flat.n = static_cast<int>(N);
    res.flat.k = 2;
    const std::uint64_t nq = N;
    for (const auto& [key, w] : inst.terms) {
        std::uint64_t s = key % nq;   // first q positions
        std::uint64_t t = key / nq;   // last q positions
        res.flat.add_term(s + t * N, w);
    }
    return res;
}

LiftResult lift_odd(const XorInstance& inst, std::uint64_t seed) {
    if (inst.k % 2 != 1)
        throw std::invalid_argument("lift_odd requires odd arity");
    if (inst.k == 1)
        throw std::invalid_argument(
            "arity-1 instances are handled by the L1 bound, not lifting");
    const int q = (inst.k - 1) / 2;
    check_key_space(inst.n, inst.k + 1);
    const std::uint64_t N = upow(inst.n, q + 1);  // per side

    LiftResult res;
    res.q = q;
    res.side = N;
    res.flat.n = static_cast<int>(2 * N);
    res.flat.k = 2;

    std::mt19937_64 rng = make_rng(seed);
    std::uniform_int_distribution<int> pick(0, inst.n - 1);
    const std::uint64_t nq1 = N;
    for (const auto& [key, w] : inst.terms) {
        std::uint64_t s = key % nq1;  // first q+1 positions -> y_S
        std::uint64_t t = key / nq1;  // last q positions
        int i_u = pick(rng);
        res.chosen_index[key] = i_u;
        std::uint64_t z = t + static_cast<std::uint64_t>(i_u) * upow(inst.n, q);
        std::uint64_t zvar = N + z;
        res.flat.add_term(s + zvar * (2 * N), w);
    }
    return res;
}

int pullback_value(std::uint64_t flat_var, std::uint64_t side, int n, int q,
                   bool lifted, const std::vector<int>& x) {
    int digits;
    std::uint64_t rem;
    if (!lifted) {
        digits = q;
        rem = flat_var;
    } else if (flat_var < side) {
        digits = q + 1;  // y_S
        rem = flat_var;
    } else {
        digits = q;      // z_{T,i} with w == 1
        rem = flat_var - side;
    }
    int prod = 1;
    for (int i = 0; i < digits; ++i) {
        prod *= x[rem % n];
        rem /= n;
    }
    return prod;
}

SignedGraph xor_to_graph(const XorInstance& arity2,
                         std::vector<std::uint64_t>& index_map) {
    if (arity2.k != 2) throw std::invalid_argument("xor_to_graph wants arity 2");
    const std::uint64_t N = arity2.n;

    // 2B = W + W^T; accumulate on unordered pairs.
    std::map<std::pair<std::uint64_t, std::uint64_t>, long long> twoB;
    for (const auto& [key, w] : arity2.terms) {
        std::uint64_t i = key % N, j = key / N;
        // diagonal loops get multiplicity 2|W_ii| so the pi-weighted walk form
        // reproduces x^T B x / |E| exactly.
        auto p = std::minmax(i, j);
        twoB[{p.first, p.second}] += (i == j) ? 2 * w : w;
    }

    std::map<std::uint64_t, int> compress;
    std::vector<SignedEdge> edges;
    auto vid = [&](std::uint64_t v) {
        auto it = compress.find(v);
        if (it != compress.end()) return it->second;
        int id = static_cast<int>(compress.size());
        compress[v] = id;
        index_map.push_back(v);
        return id;
    };
    index_map.clear();
    for (const auto& [pair, val] : twoB) {
        if (val == 0) continue;
        int sign = val > 0 ? 1 : -1;
        if (pair.first == pair.second) {
            int u = vid(pair.first);
            edges.push_back({u, u, std::llabs(val), sign});
        } else {
            int u = vid(pair.first);
            int v = vid(pair.second);
            edges.push_back({u, v, std::llabs(val), sign});
        }
    }
    if (edges.empty())
        throw std::invalid_argument("instance has no surviving terms");
    return SignedGraph::build(static_cast<int>(compress.size()), edges);
}

RefutationReport refute_xor(const XorInstance& inst, double epsilon,
                            std::uint64_t seed, int max_ell) {
    RefutationReport rep;
    rep.epsilon = epsilon;
    rep.target_bound = 0.5 + 1.5 * epsilon;
    if (inst.k < 2) throw std::invalid_argument("refute_xor requires arity >= 2");

    XorInstance flat;
    int factor = 0;
    bool lifted = false;
    if (inst.k == 2) {
        flat = inst;
        factor = 1;
        rep.n_flat = inst.n;
    } else if (inst.k % 2 == 0) {
        FlattenResult f = flatten_even(inst);
        flat = std::move(f.flat);
        factor = f.q;
        rep.n_flat = f.n_flat;
    } else {
        LiftResult l = lift_odd(inst, derive_seed(seed, 1));
        flat = std::move(l.flat);
        factor = l.q + 1;
        lifted = true;
        rep.n_flat = 2 * l.side;
    }

    if (flat.terms.empty()) {
        rep.refuted = false;
        rep.failure_reason = "instance is empty after reduction";
        return rep;
    }
    std::vector<std::uint64_t> index_map;
    SignedGraph g = xor_to_graph(flat, index_map);
    rep.support = g.n();
    rep.pi_star = g.pi_star();
    rep.d_min = *std::min_element(g.deg().begin(), g.deg().end());
    rep.m_graph = static_cast<long long>(g.two_m() / 2);

    WalkOperator w = WalkOperator::build(g);
    rep.rho = spectral_radius(w.Kbar, g.pi());

    // Proposition-style rho from empirical weight statistics, both log
    // conventions reported.
    {
        std::uint64_t keys = upow(inst.n, inst.k);
        double sum_sq = 0, sum_abs = 0, max_abs = 0;
        for (const auto& [key, b] : inst.terms) {
            double a = std::fabs(static_cast<double>(b));
            sum_sq += a * a;
            sum_abs += a;
            max_abs = std::fmax(max_abs, a);
        }
        double sigma = std::sqrt(sum_sq / keys);
        double e_abs = sum_abs / keys;
        double half_side = std::pow(static_cast<double>(inst.n), inst.k / 2);
        if (e_abs > 0) {
            double base = sigma / (e_abs * std::sqrt(half_side)) *
                          std::fmax(1.0, max_abs / std::sqrt(half_side));
            rep.rho_formula_logN =
                base * std::log(static_cast<double>(rep.n_flat));
            rep.rho_formula_logn = base * std::log(static_cast<double>(inst.n));
        }
    }

    // smallest ell with N^{1/4ell} rho <= eps^{2ell}/2 and k >= 3^ell
    double N = static_cast<double>(rep.n_flat);
    int chosen_ell = 0;
    long long k_spider = 0;
    for (int ell = 1; ell <= max_ell; ++ell) {
        double lhs = std::pow(N, 1.0 / (4.0 * ell)) * rep.rho;
        double rhs = 0.5 * std::pow(epsilon, 2 * ell);
        if (lhs > rhs) continue;
        double kd = std::ceil(std::pow(1.0 / epsilon, 2.0 * ell) - 1e-9);
        if (kd < std::pow(3.0, ell)) continue;
        if (kd > 1e9) {
            rep.failure_reason = "required spider width exceeds supported size";
            break;
        }
        chosen_ell = ell;
        k_spider = static_cast<long long>(kd);
        break;
    }
    if (chosen_ell == 0) {
        rep.refuted = false;
        if (rep.failure_reason.empty())
            rep.failure_reason =
                "measured spectral radius too large for any ell <= " +
                std::to_string(max_ell) + " (rho = " + std::to_string(rep.rho) +
                "); refutation unavailable at this epsilon";
        return rep;
    }
    rep.ell = chosen_ell;
    rep.k_spider = k_spider;

    Certificate cert = certify_2xor(g, static_cast<int>(k_spider), chosen_ell);
    rep.locality = cert.locality;
    rep.sa_rounds = cert.locality * factor;
    rep.certified_bound = cert.bound_obj;
    rep.certified_bound_sharp = cert.bound_obj_sharp;
    rep.refuted = !cert.vacuous && cert.bound_obj < 1.0;
    if (!rep.refuted) rep.failure_reason = "certified bound is vacuous";
    rep.certificate = std::move(cert);
    (void)lifted;
    return rep;
}

std::map<std::uint32_t, XorInstance> decompose_instance(const CspInstance& inst) {
    const std::uint32_t full = (1u << inst.k);
    std::map<std::uint32_t, XorInstance> out;
    for (std::uint32_t alpha = 1; alpha < full; ++alpha) {
        XorInstance sub;
        sub.n = inst.n;
        sub.k = __builtin_popcount(alpha);
        out.emplace(alpha, std::move(sub));
    }
    for (const auto& c : inst.clauses) {
        std::vector<int> digits = decode_multiset(c.scope, inst.n, inst.k);
        for (std::uint32_t alpha = 1; alpha < full; ++alpha) {
            std::vector<int> restricted;
            long long sign = 1;
            for (int i = 0; i < inst.k; ++i)
                if (alpha & (1u << i)) {
                    restricted.push_back(digits[i]);
                    sign *= c.negations[i];
                }
            out[alpha].add_term(encode_multiset(restricted, inst.n), sign);
        }
    }
    return out;
}

PredicateReport refute_predicate(const CspInstance& inst, double epsilon,
                                 double delta, std::uint64_t seed) {
    if (inst.clauses.empty())
        throw std::invalid_argument("cannot score an empty instance");
    if (epsilon <= 0 || delta < 0 || delta >= 1)
        throw std::invalid_argument("bad refutation parameters");

    PredicateReport rep;
    FourierTable ft = fourier(inst.predicate);
    rep.m = static_cast<long long>(inst.clauses.size());
    rep.e_p = ft.coefficient(0);
    rep.bound = rep.e_p;
    rep.paper_bound =
        rep.e_p + std::sqrt(static_cast<double>(1u << inst.k)) * 1.5 * epsilon;

    auto subs = decompose_instance(inst);
    const double m = static_cast<double>(rep.m);
    bool all_ok = true;
    long long rounds = 0;
    for (auto& [alpha, sub] : subs) {
        PredicateReport::AlphaEntry e;
        e.alpha = alpha;
        e.hat = ft.coefficient(alpha);
        e.m_alpha = sub.m_abs();
        double l1 = e.m_alpha / m;
        if (e.hat == 0.0 || e.m_alpha == 0) {
            e.via_l1 = true;
            e.bound = (e.hat == 0.0) ? 0.0 : l1;
            rep.entries.push_back(std::move(e));
            continue;
        }
        if (__builtin_popcount(alpha) == 1) {
            e.via_l1 = true;
            e.bound = l1;
        } else {
            e.sub = refute_xor(sub, epsilon, derive_seed(seed, alpha));
            if (e.sub.refuted) {
                double beta = 2.0 * (e.sub.certified_bound - 0.5);
                e.bound = std::fmin(l1, beta * e.sub.m_graph / m);
                rounds = std::max(rounds, e.sub.sa_rounds);
            } else {
                e.via_l1 = true;
                e.bound = l1;
                if (all_ok) rep.blocking_alpha = alpha;
                all_ok = false;
            }
        }
        rep.bound += std::fabs(e.hat) * e.bound;
        rep.entries.push_back(std::move(e));
    }
    rep.sa_rounds = rounds + inst.k;
    rep.refuted = all_ok && rep.bound < 1.0;
    return rep;
}

WeightStats weight_dist_stats(std::uint64_t N, double p, std::uint64_t samples,
                              std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("need at least one sample");
    if (p < 0 || p > 1) throw std::invalid_argument("p out of range");
    WeightStats s;
    s.N = N;
    s.p = p;
    s.samples = samples;
    const double pN = p * static_cast<double>(N);

    std::mt19937_64 rng = make_rng(seed);
    std::binomial_distribution<long long> binN(static_cast<long long>(N), p);

    double sx = 0, sx2 = 0, sx4 = 0, sabs = 0;
    std::vector<std::uint64_t> tail_large(4, 0), tail_small(3, 0);
    const int small_t[3] = {1, 2, 4};
    for (std::uint64_t i = 0; i < samples; ++i) {
        long long k = binN(rng);
        std::binomial_distribution<long long> heads(k, 0.5);
        long long x = 2 * heads(rng) - k;
        double xd = static_cast<double>(x), ax = std::fabs(xd);
        sx += xd;
        sx2 += xd * xd;
        sx4 += xd * xd * xd * xd;
        sabs += ax;
        for (int t = 1; t <= 3; ++t)
            if (ax > 2.0 * t * std::sqrt(pN)) ++tail_large[t];
        for (int i = 0; i < 3; ++i)
            if (ax >= 1.0 + small_t[i]) ++tail_small[i];
    }
    const double ns = static_cast<double>(samples);
    s.mean = sx / ns;
    s.second_moment = sx2 / ns;
    s.mean_abs = sabs / ns;
    double var_x = std::fmax(0.0, s.second_moment - s.mean * s.mean);
    double var_x2 = std::fmax(0.0, sx4 / ns - s.second_moment * s.second_moment);
    double var_abs = std::fmax(0.0, s.second_moment - s.mean_abs * s.mean_abs);
    s.mean_se = std::sqrt(var_x / ns);
    s.second_moment_se = std::sqrt(var_x2 / ns);
    s.mean_abs_se = std::sqrt(var_abs / ns);

    if (pN >= 1.0) s.lower_bound_large = 2.0 / std::exp(1.5) * std::sqrt(pN);
    if (pN < 1.0) {
        double lg = std::log(1.0 / (1.0 - pN));
        s.lower_bound_small = lg / (2.0 * std::exp(1.0));
        s.lower_bound_small_proof = lg / std::exp(1.0);
    }

    s.pass = true;
    // E X^2 = pN exactly; E X = 0.
    if (std::fabs(s.second_moment - pN) > 4.0 * s.second_moment_se + 1e-12)
        s.pass = false;
    if (std::fabs(s.mean) > 4.0 * s.mean_se + 1e-12) s.pass = false;
    double applicable = pN >= 1.0 ? s.lower_bound_large : s.lower_bound_small;
    if (s.mean_abs + 4.0 * s.mean_abs_se < applicable) s.pass = false;

    s.tail_violation_rate = 0;
    auto check_tail = [&](std::uint64_t count, double permitted) {
        double rate = static_cast<double>(count) / ns;
        double se = std::sqrt(std::fmax(rate * (1 - rate), 1.0 / ns) / ns);
        if (permitted > 0)
            s.tail_violation_rate = std::fmax(s.tail_violation_rate, rate / permitted);
        if (rate - 4.0 * se > permitted) s.pass = false;
    };
    if (pN >= 1.0)
        for (int t = 1; t <= 3; ++t)
            check_tail(tail_large[t], 2.0 * std::exp(-static_cast<double>(t) * t));
    else
        for (int i = 0; i < 3; ++i)
            check_tail(tail_small[i], std::exp(-small_t[i] / 2.0));
    return s;
}

XorInstance gen_weighted_xor(int n, int k, const WeightSpec& w,
                             std::uint64_t seed) {
    if (n < 1 || k < 1) throw std::invalid_argument("bad dimensions");
    if (w.p < 0 || w.p > 1) throw std::invalid_argument("p out of range");
    check_key_space(n, k);
    XorInstance inst;
    inst.n = n;
    inst.k = k;
    std::mt19937_64 rng = make_rng(seed);
    std::bernoulli_distribution keep(w.p);
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<std::size_t> atom(
        0, w.table.empty() ? 0 : w.table.size() - 1);
    const std::uint64_t keys = upow(n, k);
    for (std::uint64_t key = 0; key < keys; ++key) {
        if (!keep(rng)) continue;
        long long b = w.table.empty() ? (coin(rng) ? 1 : -1) : w.table[atom(rng)];
        inst.add_term(key, b);
    }
    return inst;
}

CspInstance gen_csp(int n, int k, const std::vector<int>& truth_table,
                    double m_expected, std::uint64_t seed) {
    if (n < 1 || k < 1 || k > 20) throw std::invalid_argument("bad dimensions");
    if (truth_table.size() != (1u << k))
        throw std::invalid_argument("truth table size must be 2^k");
    check_key_space(n, k);
    CspInstance inst;
    inst.n = n;
    inst.k = k;
    inst.predicate = truth_table;
    const std::uint64_t keys = upow(n, k);
    inst.p = std::fmin(1.0, m_expected / static_cast<double>(keys));
    std::mt19937_64 rng = make_rng(seed);
    std::bernoulli_distribution keep(inst.p);
    std::bernoulli_distribution coin(0.5);
    for (std::uint64_t key = 0; key < keys; ++key) {
        if (!keep(rng)) continue;
        CspInstance::Clause c;
        c.scope = key;
        c.negations.resize(k);
        for (int i = 0; i < k; ++i) c.negations[i] = coin(rng) ? 1 : -1;
        inst.clauses.push_back(std::move(c));
    }
    return inst;
}

}  // namespace sacert
