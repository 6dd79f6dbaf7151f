#ifndef SACERT_CSP_HPP
#define SACERT_CSP_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sacert/certifier.hpp"
#include "sacert/graph.hpp"

namespace sacert {

// Ordered multisets S in [n]^k are encoded as k base-n digits, digit 0 being
// the first element of S.
std::uint64_t encode_multiset(const std::vector<int>& s, int n);
std::vector<int> decode_multiset(std::uint64_t key, int n, int k);

// Weighted arity-k XOR objective sum_S b_S x^S with integer weights.
struct XorInstance {
    int n = 0;
    int k = 0;
    std::map<std::uint64_t, long long> terms;  // key -> b_S, zeros dropped

    long long m_abs() const;  // sum |b_S|
    // Objective sum_S b_S x^S at a +/-1 assignment (not normalized).
    long long raw_objective(const std::vector<int>& x) const;
    void add_term(std::uint64_t key, long long w);
};

// CSP instance of a k-ary Boolean predicate.  The predicate truth table is
// indexed so that bit i of the index gives z_{i+1}: bit set means z = -1.
struct CspInstance {
    int n = 0;
    int k = 0;
    std::vector<int> predicate;  // size 2^k, values in {0,1}
    struct Clause {
        std::uint64_t scope;          // key of S in [n]^k
        std::vector<int> negations;   // zeta_S in {+1,-1}^k
    };
    std::vector<Clause> clauses;
    double p = 0;  // clause probability m / n^k

    int eval_clause(const Clause& c, const std::vector<int>& x) const;
    // Satisfied fraction at a +/-1 assignment.
    double objective(const std::vector<int>& x) const;
};

// Exact dyadic Fourier coefficients of a predicate: hat(alpha) = num / 2^k.
struct FourierTable {
    int k = 0;
    std::vector<long long> numerator;  // index = subset bitmask alpha

    double coefficient(std::uint32_t alpha) const {
        return static_cast<double>(numerator[alpha]) / (1 << k);
    }
};

FourierTable fourier(const std::vector<int>& truth_table);

// Even-arity flattening: a 2q-XOR on n variables becomes a 2-XOR on n^q tuple
// variables y_S, pairing the first q positions against the last q.
struct FlattenResult {
    XorInstance flat;       // arity 2 on n^q variables
    int q = 0;              // degree translation factor
    std::uint64_t n_flat = 0;
};
FlattenResult flatten_even(const XorInstance& inst);

// Odd-arity lift: a (2q+1)-XOR becomes a bipartite 2-XOR between y-side
// variables in [n]^{q+1} (ids 0..N-1) and z-side variables (T, i) in
// [n]^q x [n] (ids N..2N-1), N = n^{q+1}.  Index i_U is drawn per term.
struct LiftResult {
    XorInstance flat;  // arity 2 on 2 n^{q+1} variables
    int q = 0;         // degree factor is q+1
    std::uint64_t side = 0;  // N = n^{q+1}
    std::map<std::uint64_t, int> chosen_index;  // term key -> i_U
};
LiftResult lift_odd(const XorInstance& inst, std::uint64_t seed);

// Pullback value of a flat variable under y_S = prod_{i in S} x_i (z-side
// lift variables use w == 1, so they also reduce to x^T).
int pullback_value(std::uint64_t flat_var, std::uint64_t side, int n, int q,
                   bool lifted, const std::vector<int>& x);

struct RefutationReport {
    bool refuted = false;
    std::string failure_reason;
    double epsilon = 0;
    double target_bound = 0;      // 1/2 + (3/2) eps from the round selection
    double certified_bound = 0;   // 1/2 + beta/2 with everything measured
    double certified_bound_sharp = 0;
    double rho = 0;
    double pi_star = 0;
    long long d_min = 0;
    long long m_graph = 0;        // |E| of the reduction multigraph
    int ell = 0;
    long long k_spider = 0;
    long long locality = 0;       // certifier locality (k ell + 1)
    long long sa_rounds = 0;      // locality x flattening factor
    double rho_formula_logN = 0;  // proposition's rho with log N_flat
    double rho_formula_logn = 0;  // proposition's rho with log n
    std::optional<Certificate> certificate;
    std::uint64_t n_flat = 0;
    int support = 0;              // flat variables with nonzero degree
};

// Flatten/lift to 2-XOR, build the signed multigraph of B = (W + W^T)/2 on
// the support, measure rho/pi_*/d_min, choose ell so that
// N^{1/4ell} rho <= eps^{2ell}/2, and certify.  A failure to find such ell
// within ell <= 8 is reported, not thrown.
RefutationReport refute_xor(const XorInstance& inst, double epsilon,
                            std::uint64_t seed = 0, int max_ell = 8);

// Builds the reduction multigraph of an arity-2 instance (support only);
// index_map[i] = flat variable id of graph vertex i.
SignedGraph xor_to_graph(const XorInstance& arity2,
                         std::vector<std::uint64_t>& index_map);

// Per-alpha XOR sub-instances with weights
// w_T = sum_{S: S|_alpha = T} b_S prod_{a in alpha} (zeta_S)_a.
std::map<std::uint32_t, XorInstance> decompose_instance(const CspInstance& inst);

struct PredicateReport {
    bool refuted = false;
    double e_p = 0;         // hat P(empty)
    double bound = 0;       // E[P] + sum |hat P(alpha)| * bound_alpha
    double paper_bound = 0; // E[P] + sqrt(2^k) (3/2) eps
    std::uint32_t blocking_alpha = 0;  // set when !refuted
    struct AlphaEntry {
        std::uint32_t alpha = 0;
        long long m_alpha = 0;
        double hat = 0;
        double bound = 0;  // certified bound on |I^alpha| (already /m)
        bool via_l1 = false;
        RefutationReport sub;
    };
    std::vector<AlphaEntry> entries;
    long long m = 0;
    long long sa_rounds = 0;
};

PredicateReport refute_predicate(const CspInstance& inst, double epsilon,
                                 double delta, std::uint64_t seed = 0);

// Monte Carlo diagnostics for X = sum_{t<=N} Ber(p) * Rademacher.
struct WeightStats {
    std::uint64_t N = 0;
    double p = 0;
    std::uint64_t samples = 0;
    double mean = 0, mean_se = 0;
    double second_moment = 0, second_moment_se = 0;
    double mean_abs = 0, mean_abs_se = 0;
    double lower_bound_large = 0;  // (2/e^{3/2}) sqrt(pN), applies if pN >= 1
    double lower_bound_small = 0;  // (1/2e) log(1/(1-pN)), applies if pN <= 1
    double lower_bound_small_proof = 0;  // the 1/e variant from the proof
    double tail_violation_rate = 0;      // worst ratio observed/permitted
    bool pass = true;
};

WeightStats weight_dist_stats(std::uint64_t N, double p, std::uint64_t samples,
                              std::uint64_t seed);

// Seeded generators; key space must satisfy k * log2(n) <= 48.
struct WeightSpec {
    // Rademacher * Bernoulli(p) by default; 'table' overrides with explicit
    // integer atoms drawn uniformly.
    double p = 1.0;
    std::vector<long long> table;
};
XorInstance gen_weighted_xor(int n, int k, const WeightSpec& w,
                             std::uint64_t seed);
CspInstance gen_csp(int n, int k, const std::vector<int>& truth_table,
                    double m_expected, std::uint64_t seed);

}  // namespace sacert

#endif
