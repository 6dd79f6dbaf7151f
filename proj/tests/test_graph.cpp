#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "sacert/bench.hpp"
#include "sacert/graph.hpp"
#include "sacert/rng.hpp"

using namespace sacert;

namespace {

SignedGraph signed_c4() {
    std::vector<SignedEdge> e{
        {0, 1, 1, 1}, {1, 2, 1, -1}, {2, 3, 1, 1}, {3, 0, 1, -1}};
    return SignedGraph::build(4, e);
}

}  // namespace

TEST_CASE("triangle stationary distribution") {
    SignedGraph g = make_complete(3);
    CHECK(g.n() == 3);
    for (int v = 0; v < 3; ++v) CHECK(g.pi()[v] == doctest::Approx(1.0 / 3));
    CHECK(g.pi_star() == doctest::Approx(1.0 / 3));
    CHECK(g.pi().sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("path degrees weight the middle vertex") {
    SignedGraph g = make_path(3);
    CHECK(g.pi()[0] == doctest::Approx(0.25));
    CHECK(g.pi()[1] == doctest::Approx(0.5));
    CHECK(g.pi()[2] == doctest::Approx(0.25));
}

TEST_CASE("a loop counts one degree and half an edge") {
    SignedGraph g = SignedGraph::build(1, {{0, 0, 1, 1}});
    CHECK(g.deg()[0] == 1);
    CHECK(g.two_m() == doctest::Approx(1.0));
    CHECK(g.pi()[0] == doctest::Approx(1.0));
}

TEST_CASE("construction rejects bad inputs") {
    CHECK_THROWS_AS(SignedGraph::build(2, {}), std::invalid_argument);
    // vertex 2 isolated
    CHECK_THROWS_AS(SignedGraph::build(3, {{0, 1, 1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(SignedGraph::build(2, {{0, 1, 1, 2}}), std::invalid_argument);
    // parallel edges must agree in sign
    CHECK_THROWS_AS(SignedGraph::build(2, {{0, 1, 1, 1}, {1, 0, 1, -1}}),
                    std::invalid_argument);
}

TEST_CASE("walk operator invariants") {
    for (const SignedGraph& g :
         {make_complete(3), make_path(4), make_cycle(5), signed_c4()}) {
        WalkOperator w = WalkOperator::build(g);
        const int n = g.n();
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        CHECK((w.K * ones - ones).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((w.K.transpose() * g.pi() - g.pi()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((w.Kprime * ones).cwiseAbs().maxCoeff() <= 1e-12);
        Eigen::MatrixXd pk = g.pi().asDiagonal() * w.Kbar;
        CHECK((pk - pk.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        Eigen::MatrixXd pkd = g.pi().asDiagonal() * w.K;  // detailed balance
        CHECK((pkd - pkd.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("triangle signed operator flips the walk") {
    SignedGraph g = make_complete(3);
    WalkOperator w = WalkOperator::build(g);
    CHECK((w.Kbar + w.K).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(w.K(0, 1) == doctest::Approx(0.5));
    CHECK(spectral_radius(w.Kbar, g.pi()) == doctest::Approx(1.0));
}

TEST_CASE("complete graph centered walk spectrum") {
    SignedGraph g = make_complete(5);
    WalkOperator w = WalkOperator::build(g);
    CHECK(spectral_radius(w.Kprime, g.pi()) == doctest::Approx(0.25));
}

TEST_CASE("four-cycle walk spectrum") {
    SignedGraph g = make_cycle(4);
    WalkOperator w = WalkOperator::build(g);
    // K eigenvalues are cos(2 pi j / 4) = {1, 0, -1, 0}
    CHECK(spectral_radius(w.Kprime, g.pi()) == doctest::Approx(1.0));
}

TEST_CASE("spectral radius of the zero operator") {
    SignedGraph g = make_complete(3);
    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
    CHECK(spectral_radius(zero, g.pi()) == doctest::Approx(0.0));
}

TEST_CASE("spectral radius rejects non-self-adjoint operators") {
    SignedGraph g = make_path(3);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(3, 3);
    bad(0, 1) = 1.0;  // Pi*bad is not symmetric
    CHECK_THROWS_AS(spectral_radius(bad, g.pi()), std::invalid_argument);
}

TEST_CASE("centered spectrum never exceeds one") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
        SignedGraph g = gen_gnp(12, 4.0, seed);
        WalkOperator w = WalkOperator::build(g);
        CHECK(spectral_radius(w.Kprime, g.pi()) <= 1.0 + 1e-9);
    }
}

TEST_CASE("single-edge tree walks give uniform directed edges") {
    SignedGraph g = make_complete(3);
    WalkOperator w = WalkOperator::build(g);
    auto samples = enumerate_tree_walks(g, w, Tree::path(1));
    double total = 0;
    std::map<std::pair<int, int>, double> marginal;
    for (const auto& s : samples) {
        double pr = std::exp(s.log_weight);
        total += pr;
        marginal[{s.phi[0], s.phi[1]}] += pr;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(marginal.size() == 6);  // ordered pairs of distinct vertices
    for (const auto& [pair, pr] : marginal)
        CHECK(pr == doctest::Approx(1.0 / 6));
}

TEST_CASE("two-step walks on the triangle are uniform") {
    SignedGraph g = make_complete(3);
    WalkOperator w = WalkOperator::build(g);
    auto samples = enumerate_tree_walks(g, w, Tree::path(2));
    // 3 * 2 * 2 homomorphisms; each probability 1/12, split over two root signs
    std::map<std::vector<int>, double> by_hom;
    for (const auto& s : samples) by_hom[s.phi] += std::exp(s.log_weight);
    CHECK(by_hom.size() == 12);
    for (const auto& [phi, pr] : by_hom) CHECK(pr == doctest::Approx(1.0 / 12));
}

TEST_CASE("root choice does not change the walk distribution") {
    SignedGraph g = signed_c4();
    WalkOperator w = WalkOperator::build(g);
    Tree t = Tree::path(3);
    std::map<std::vector<int>, double> a, b;
    for (const auto& s : enumerate_tree_walks(g, w, t, 0))
        a[s.phi] += std::exp(s.log_weight);
    for (const auto& s : enumerate_tree_walks(g, w, t, 3))
        b[s.phi] += std::exp(s.log_weight);
    REQUIRE(a.size() == b.size());
    for (const auto& [phi, pr] : a) CHECK(b.at(phi) == doctest::Approx(pr));
}

TEST_CASE("signed path expectations match the operator power") {
    SignedGraph g = signed_c4();
    WalkOperator w = WalkOperator::build(g);
    std::mt19937_64 rng = make_rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    Eigen::VectorXd f(4), h(4);
    for (int i = 0; i < 4; ++i) {
        f[i] = u(rng);
        h[i] = u(rng);
    }
    for (int d : {1, 2, 3, 4}) {
        Eigen::MatrixXd kd = Eigen::MatrixXd::Identity(4, 4);
        for (int i = 0; i < d; ++i) kd = kd * w.Kbar;
        double lhs = f.dot(g.pi().asDiagonal() * (kd * h));
        double rhs = 0;
        for (const auto& s : enumerate_tree_walks(g, w, Tree::path(d))) {
            rhs += std::exp(s.log_weight) * s.sigma.front() * f[s.phi.front()] *
                   s.sigma.back() * h[s.phi.back()];
        }
        CHECK(rhs == doctest::Approx(lhs).epsilon(1e-10));
    }
}

TEST_CASE("edge expectation identity") {
    SignedGraph g = make_path(4);
    WalkOperator w = WalkOperator::build(g);
    std::mt19937_64 rng = make_rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    Eigen::VectorXd f(4), h(4);
    for (int i = 0; i < 4; ++i) {
        f[i] = u(rng);
        h[i] = u(rng);
    }
    // E over uniformly random directed edges of f(u) h(v)
    double direct = 0;
    for (const auto& e : g.edges()) {
        direct += e.mult * (f[e.u] * h[e.v] + f[e.v] * h[e.u]);
    }
    direct /= g.two_m();
    double op = f.dot(g.pi().asDiagonal() * (w.K * h));
    CHECK(direct == doctest::Approx(op).epsilon(1e-12));
}

TEST_CASE("enumeration guard rejects huge products") {
    SignedGraph g = make_complete(20);
    WalkOperator w = WalkOperator::build(g);
    CHECK_THROWS_AS(enumerate_tree_walks(g, w, Tree::spider(3, 2)),
                    std::length_error);
}
