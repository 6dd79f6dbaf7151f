#ifndef SACERT_BENCH_HPP
#define SACERT_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sacert/certifier.hpp"
#include "sacert/csp.hpp"
#include "sacert/graph.hpp"

namespace sacert {

// Standard all-(-1) fixtures (max-cut orientation).
SignedGraph make_complete(int n);
SignedGraph make_cycle(int n);
SignedGraph make_path(int n);

// G(n, p) with p = avg_degree/(n-1), all-(-1) signs; resamples until no
// vertex is isolated (cap 1000 tries).
SignedGraph gen_gnp(int n, double avg_degree, std::uint64_t seed);

// Configuration-model Delta-regular multigraph; a self-pair becomes a loop of
// multiplicity 2 so the degree stays exactly Delta.  With simple=true retries
// until loop- and multi-edge-free; on cap the multigraph is returned and
// *warning is set.
SignedGraph gen_regular(int n, int delta, std::uint64_t seed,
                        bool simple = false, std::string* warning = nullptr,
                        int retry_cap = 1000);

// Exact optimum as a reduced fraction, with the double value alongside.
struct BruteResult {
    long long num = 0;
    long long den = 1;
    double value = 0;
    std::uint64_t best_assignment = 0;
};

// Objective maximized: 1/2 + <x, Kbar x>_pi / 2 for graphs, the satisfied
// fraction for instances.  Gray-code single-flip updates; n <= 26.
BruteResult brute_optimum(const SignedGraph& g);
BruteResult brute_optimum(const XorInstance& inst);
BruteResult brute_optimum(const CspInstance& inst);

struct EigBounds {
    double laplacian_bound = 0;  // (|V| / 4|E|) lambda_max(D - A)
    double walk_bound = 0;       // 1/2 + lambda_max(-D^{-1} A) / 2
};

EigBounds eig_bounds(const SignedGraph& g);

struct ExperimentConfig {
    std::string generator;  // regular | gnp | complete | cycle
    int n = 0;
    double param = 0;       // Delta or average degree
    std::string kind = "maxcut";  // maxcut | 2xor (random signs)
    double epsilon = 0;     // used when k == 0
    int k = 0, ell = 0;
    std::uint64_t seed = 0;
    bool simple = false;
    int brute_cap = 26;
};

struct Experiment {
    ExperimentConfig config;
    double rho = 0, pi_star = 0;
    long long d_min = 0, m = 0;
    EigBounds eig;
    double cert_bound = 0, cert_bound_sharp = 0;
    bool cert_vacuous = false;
    std::optional<double> optimum;
    std::optional<double> feas_value;  // R = 1 feasible point when applicable
    double gen_ms = 0, cert_ms = 0, brute_ms = 0;
    bool soundness_ok = true;
    std::string error;
};

Experiment run_experiment(const ExperimentConfig& config);

std::string experiment_csv_header();
std::string to_csv(const Experiment& e);

}  // namespace sacert

#endif
