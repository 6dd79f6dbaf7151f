#ifndef SACERT_GRAPH_HPP
#define SACERT_GRAPH_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "sacert/tolerance.hpp"

namespace sacert {

// One merged edge of a signed multigraph.  A self-loop (u == v) contributes 1
// to deg(u) per unit of multiplicity and counts as half an edge in |E|.
struct SignedEdge {
    int u;
    int v;
    long long mult;  // > 0
    int sign;        // +1 or -1; all parallel (u,v) edges share one sign
};

// Immutable signed multigraph with stationary distribution pi(v) = deg(v)/2|E|.
class SignedGraph {
public:
    // Merges parallel entries; throws std::invalid_argument on an empty edge
    // list, an isolated vertex, a bad sign, or a sign conflict between
    // parallel edges.
    static SignedGraph build(int n, const std::vector<SignedEdge>& edges);

    int n() const { return n_; }
    const std::vector<SignedEdge>& edges() const { return edges_; }
    const std::vector<long long>& deg() const { return deg_; }
    double two_m() const { return two_m_; }  // = 2|E|
    const Eigen::VectorXd& pi() const { return pi_; }
    double pi_star() const { return pi_star_; }

private:
    SignedGraph() = default;
    int n_ = 0;
    std::vector<SignedEdge> edges_;
    std::vector<long long> deg_;
    double two_m_ = 0;
    Eigen::VectorXd pi_;
    double pi_star_ = 0;
};

// Dense walk operators for a signed multigraph:
//   K       row-stochastic transition matrix,
//   Xi      symmetric sign matrix (0 where no edge),
//   Kbar    Xi (.) K, self-adjoint under <.,.>_pi,
//   J       rank-one stationary projector J_{uv} = pi(v),
//   Kprime  K - J.
struct WalkOperator {
    Eigen::MatrixXd K;
    Eigen::MatrixXd Xi;
    Eigen::MatrixXd Kbar;
    Eigen::MatrixXd J;
    Eigen::MatrixXd Kprime;
    Eigen::VectorXd pi;

    static WalkOperator build(const SignedGraph& g);
};

// Max-magnitude eigenvalue of an operator that is self-adjoint under the
// pi-weighted inner product.  Symmetrizes as Pi^{1/2} M Pi^{-1/2} first and
// rejects (throws std::invalid_argument) if Pi*M is not symmetric within
// tolerance.  Dense solve for n <= 4096, power iteration above.
double spectral_radius(const Eigen::MatrixXd& op, const Eigen::VectorXd& pi,
                       const Tol& tol = Tol::defaults());

// Power iteration for the max-magnitude eigenvalue of a symmetric matrix,
// optionally deflating a known eigenvector (e.g. the trivial one of K).
double power_iteration(const Eigen::MatrixXd& sym, int max_iters = 5000,
                       double tol = 1e-12,
                       const Eigen::VectorXd* deflate = nullptr);

// A finite tree on vertices 0..n-1 used to index stationary walks.
struct Tree {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    static Tree path(int num_edges);
    static Tree spider(int k, int ell);

    // parent[v] w.r.t. the given root; parent[root] = -1; vertices appear in
    // BFS order in 'order'.
    struct Rooted {
        std::vector<int> parent;
        std::vector<int> order;
    };
    Rooted root_at(int root) const;
};

// One outcome of a signed stationary tree-indexed walk.
struct WalkSample {
    std::vector<int> phi;    // tree vertex -> graph vertex
    std::vector<int> sigma;  // tree vertex -> +/-1
    double log_weight;       // log-probability (includes the 1/2 root sign)
};

// Enumerates every (phi, sigma) outcome with its exact probability, rooting
// the tree at 'root'.  Guard: |T| * log2|V| <= 24; throws std::length_error
// with a size estimate otherwise.
void for_each_tree_walk(const SignedGraph& g, const WalkOperator& w,
                        const Tree& t,
                        const std::function<void(const WalkSample&)>& fn,
                        int root = 0);

std::vector<WalkSample> enumerate_tree_walks(const SignedGraph& g,
                                             const WalkOperator& w,
                                             const Tree& t, int root = 0);

// Draws one signed stationary tree-indexed walk.
WalkSample sample_tree_walk(const SignedGraph& g, const WalkOperator& w,
                            const Tree& t, std::mt19937_64& rng, int root = 0);

}  // namespace sacert

#endif
