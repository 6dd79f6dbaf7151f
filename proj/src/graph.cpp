#include "sacert/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace sacert {

SignedGraph SignedGraph::build(int n, const std::vector<SignedEdge>& edges) {
    if (n <= 0) throw std::invalid_argument("graph needs at least one vertex");
    if (edges.empty()) throw std::invalid_argument("graph needs at least one edge");

    // Merge parallel entries, keyed on the unordered pair.
    std::map<std::pair<int, int>, SignedEdge> merged;
    for (const SignedEdge& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (e.mult <= 0) throw std::invalid_argument("edge multiplicity must be positive");
        if (e.sign != 1 && e.sign != -1)
            throw std::invalid_argument("edge sign must be +1 or -1");
        auto key = std::minmax(e.u, e.v);
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged[key] = SignedEdge{key.first, key.second, e.mult, e.sign};
        } else {
            if (it->second.sign != e.sign)
                throw std::invalid_argument(
                    "parallel edges (" + std::to_string(e.u) + "," +
                    std::to_string(e.v) + ") have conflicting signs");
            it->second.mult += e.mult;
        }
    }

    SignedGraph g;
    g.n_ = n;
    g.deg_.assign(n, 0);
    long long two_m = 0;
    for (const auto& [key, e] : merged) {
        g.edges_.push_back(e);
        if (e.u == e.v) {
            g.deg_[e.u] += e.mult;  // each loop adds 1 to the degree
            two_m += e.mult;        // and counts as half an edge
        } else {
            g.deg_[e.u] += e.mult;
            g.deg_[e.v] += e.mult;
            two_m += 2 * e.mult;
        }
    }
    for (int v = 0; v < n; ++v)
        if (g.deg_[v] == 0)
            throw std::invalid_argument("isolated vertex " + std::to_string(v));

    g.two_m_ = static_cast<double>(two_m);
    g.pi_.resize(n);
    for (int v = 0; v < n; ++v) g.pi_[v] = static_cast<double>(g.deg_[v]) / g.two_m_;
    g.pi_star_ = g.pi_.minCoeff();
    return g;
}

WalkOperator WalkOperator::build(const SignedGraph& g) {
    const int n = g.n();
    WalkOperator w;
    w.pi = g.pi();
    w.K = Eigen::MatrixXd::Zero(n, n);
    w.Xi = Eigen::MatrixXd::Zero(n, n);
    for (const SignedEdge& e : g.edges()) {
        double m = static_cast<double>(e.mult);
        if (e.u == e.v) {
            w.K(e.u, e.u) += m / g.deg()[e.u];
            w.Xi(e.u, e.u) = e.sign;
        } else {
            w.K(e.u, e.v) += m / g.deg()[e.u];
            w.K(e.v, e.u) += m / g.deg()[e.v];
            w.Xi(e.u, e.v) = e.sign;
            w.Xi(e.v, e.u) = e.sign;
        }
    }
    w.Kbar = w.Xi.cwiseProduct(w.K);
    w.J = Eigen::MatrixXd::Zero(n, n);
    for (int u = 0; u < n; ++u) w.J.row(u) = w.pi.transpose();
    w.Kprime = w.K - w.J;
    return w;
}

double power_iteration(const Eigen::MatrixXd& sym, int max_iters, double tol,
                       const Eigen::VectorXd* deflate) {
    const int n = static_cast<int>(sym.rows());
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    for (int i = 0; i < n; ++i) v[i] += 0.01 * std::sin(1.0 + i);  // break symmetry
    Eigen::VectorXd d;
    if (deflate) {
        d = deflate->normalized();
        v -= d.dot(v) * d;
    }
    if (v.norm() == 0) v = Eigen::VectorXd::Random(n);
    v.normalize();

    // Power iteration on sym^2 so that +/- extremal pairs do not stall.
    double lam2 = 0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd u = sym * (sym * v);
        if (deflate) u -= d.dot(u) * d;
        double nrm = u.norm();
        if (nrm == 0) return 0;
        u /= nrm;
        double next = u.dot(sym * (sym * u));
        if (std::fabs(next - lam2) <= tol * std::fmax(1.0, std::fabs(next)) && it > 3) {
            lam2 = next;
            break;
        }
        lam2 = next;
        v = u;
    }
    return std::sqrt(std::fmax(lam2, 0.0));
}

double spectral_radius(const Eigen::MatrixXd& op, const Eigen::VectorXd& pi,
                       const Tol& tol) {
    const int n = static_cast<int>(op.rows());
    if (op.cols() != n || pi.size() != n)
        throw std::invalid_argument("spectral_radius: dimension mismatch");

    // Self-adjointness under <.,.>_pi means Pi*M is symmetric.
    Eigen::MatrixXd pim = pi.asDiagonal() * op;
    double asym = (pim - pim.transpose()).cwiseAbs().maxCoeff();
    double scale = std::fmax(1.0, pim.cwiseAbs().maxCoeff());
    if (asym > 1e-9 * scale + tol.abs)
        throw std::invalid_argument(
            "spectral_radius: operator not self-adjoint under pi (residual " +
            std::to_string(asym) + ")");

    Eigen::VectorXd sqrt_pi = pi.cwiseSqrt();
    Eigen::MatrixXd sym = sqrt_pi.asDiagonal() * op * sqrt_pi.cwiseInverse().asDiagonal();
    sym = 0.5 * (sym + sym.transpose());

    if (n <= 4096) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    return power_iteration(sym);
}

Tree Tree::path(int num_edges) {
    Tree t;
    t.n = num_edges + 1;
    for (int i = 0; i < num_edges; ++i) t.edges.emplace_back(i, i + 1);
    return t;
}

Tree Tree::spider(int k, int ell) {
    Tree t;
    t.n = k * ell + 1;
    for (int leg = 0; leg < k; ++leg) {
        int prev = 0;
        for (int d = 1; d <= ell; ++d) {
            int id = 1 + leg * ell + (d - 1);
            t.edges.emplace_back(prev, id);
            prev = id;
        }
    }
    return t;
}

Tree::Rooted Tree::root_at(int root) const {
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    Rooted r;
    r.parent.assign(n, -2);
    r.parent[root] = -1;
    r.order.push_back(root);
    for (size_t head = 0; head < r.order.size(); ++head) {
        int v = r.order[head];
        for (int w : adj[v])
            if (r.parent[w] == -2) {
                r.parent[w] = v;
                r.order.push_back(w);
            }
    }
    if (static_cast<int>(r.order.size()) != n)
        throw std::invalid_argument("tree is not connected");
    return r;
}

namespace {

void recurse_walks(const SignedGraph& g, const WalkOperator& w,
                   const Tree::Rooted& r, size_t depth, WalkSample& cur,
                   const std::function<void(const WalkSample&)>& fn) {
    if (depth == r.order.size()) {
        fn(cur);
        return;
    }
    int tv = r.order[depth];
    int parent = r.parent[tv];
    if (parent < 0) {
        for (int gv = 0; gv < g.n(); ++gv) {
            if (g.pi()[gv] <= 0) continue;
            double lw = std::log(g.pi()[gv]) + std::log(0.5);
            for (int s : {+1, -1}) {
                cur.phi[tv] = gv;
                cur.sigma[tv] = s;
                double saved = cur.log_weight;
                cur.log_weight += lw;
                recurse_walks(g, w, r, depth + 1, cur, fn);
                cur.log_weight = saved;
            }
        }
    } else {
        int pu = cur.phi[parent];
        for (int gv = 0; gv < g.n(); ++gv) {
            double p = w.K(pu, gv);
            if (p <= 0) continue;
            cur.phi[tv] = gv;
            cur.sigma[tv] = cur.sigma[parent] * static_cast<int>(w.Xi(pu, gv));
            double saved = cur.log_weight;
            cur.log_weight += std::log(p);
            recurse_walks(g, w, r, depth + 1, cur, fn);
            cur.log_weight = saved;
        }
    }
}

}  // namespace

void for_each_tree_walk(const SignedGraph& g, const WalkOperator& w,
                        const Tree& t,
                        const std::function<void(const WalkSample&)>& fn,
                        int root) {
    double bits = t.n * std::log2(static_cast<double>(g.n()));
    if (bits > 24.0)
        throw std::length_error(
            "tree-walk enumeration too large: ~2^" + std::to_string(bits) +
            " homomorphisms");
    Tree::Rooted r = t.root_at(root);
    WalkSample cur;
    cur.phi.assign(t.n, -1);
    cur.sigma.assign(t.n, 0);
    cur.log_weight = 0;
    recurse_walks(g, w, r, 0, cur, fn);
}

std::vector<WalkSample> enumerate_tree_walks(const SignedGraph& g,
                                             const WalkOperator& w,
                                             const Tree& t, int root) {
    std::vector<WalkSample> out;
    for_each_tree_walk(g, w, t, [&](const WalkSample& s) { out.push_back(s); },
                       root);
    return out;
}

WalkSample sample_tree_walk(const SignedGraph& g, const WalkOperator& w,
                            const Tree& t, std::mt19937_64& rng, int root) {
    Tree::Rooted r = t.root_at(root);
    WalkSample s;
    s.phi.assign(t.n, -1);
    s.sigma.assign(t.n, 0);
    s.log_weight = 0;

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int tv : r.order) {
        int parent = r.parent[tv];
        if (parent < 0) {
            double x = unif(rng), acc = 0;
            int pick = g.n() - 1;
            for (int gv = 0; gv < g.n(); ++gv) {
                acc += g.pi()[gv];
                if (x <= acc) {
                    pick = gv;
                    break;
                }
            }
            s.phi[tv] = pick;
            s.sigma[tv] = (unif(rng) < 0.5) ? 1 : -1;
            s.log_weight += std::log(g.pi()[pick]) + std::log(0.5);
        } else {
            int pu = s.phi[parent];
            double x = unif(rng), acc = 0;
            int pick = -1;
            for (int gv = 0; gv < g.n(); ++gv) {
                acc += w.K(pu, gv);
                if (x <= acc) {
                    pick = gv;
                    break;
                }
            }
            if (pick < 0) {  // numeric slack at the right end
                for (int gv = g.n() - 1; gv >= 0; --gv)
                    if (w.K(pu, gv) > 0) {
                        pick = gv;
                        break;
                    }
            }
            s.phi[tv] = pick;
            s.sigma[tv] = s.sigma[parent] * static_cast<int>(w.Xi(pu, pick));
            s.log_weight += std::log(w.K(pu, pick));
        }
    }
    return s;
}

}  // namespace sacert
