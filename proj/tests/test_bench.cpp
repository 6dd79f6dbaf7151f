#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sacert/bench.hpp"

using namespace sacert;

namespace {

std::vector<int> bits_to_pm1(std::uint64_t mask, int n) {
    std::vector<int> x(n);
    for (int i = 0; i < n; ++i) x[i] = (mask >> i) & 1 ? -1 : 1;
    return x;
}

}  // namespace

TEST_CASE("exact cut fractions on the standard fixtures") {
    BruteResult k3 = brute_optimum(make_complete(3));
    CHECK(k3.num == 2);
    CHECK(k3.den == 3);
    CHECK(k3.value == doctest::Approx(2.0 / 3));

    BruteResult c4 = brute_optimum(make_cycle(4));
    CHECK(c4.num == 1);
    CHECK(c4.den == 1);

    BruteResult c5 = brute_optimum(make_cycle(5));
    CHECK(c5.num == 4);
    CHECK(c5.den == 5);

    BruteResult edge = brute_optimum(make_path(2));
    CHECK(edge.value == doctest::Approx(1.0));
}

TEST_CASE("optimizer agrees with naive evaluation") {
    SignedGraph g = gen_gnp(10, 4.0, 13);
    WalkOperator w = WalkOperator::build(g);
    BruteResult r = brute_optimum(g);
    double best = -1;
    for (std::uint64_t mask = 0; mask < (1ull << 10); ++mask) {
        Eigen::VectorXd x(10);
        for (int i = 0; i < 10; ++i) x[i] = (mask >> i) & 1 ? -1.0 : 1.0;
        best = std::max(best,
                        0.5 + 0.5 * x.dot(g.pi().asDiagonal() * (w.Kbar * x)));
    }
    CHECK(r.value == doctest::Approx(best).epsilon(1e-12));
    CHECK(static_cast<double>(r.num) / r.den == doctest::Approx(r.value));
    // the reported assignment attains the optimum
    Eigen::VectorXd xb(10);
    for (int i = 0; i < 10; ++i)
        xb[i] = (r.best_assignment >> i) & 1 ? -1.0 : 1.0;
    CHECK(0.5 + 0.5 * xb.dot(g.pi().asDiagonal() * (w.Kbar * xb)) ==
          doctest::Approx(r.value).epsilon(1e-12));
}

TEST_CASE("xor optimizer cross-checked") {
    WeightSpec ws;
    ws.p = 0.7;
    XorInstance inst = gen_weighted_xor(9, 2, ws, 21);
    BruteResult r = brute_optimum(inst);
    double best = -2;
    std::uint64_t arg = 0;
    for (std::uint64_t mask = 0; mask < (1ull << 9); ++mask) {
        std::vector<int> x = bits_to_pm1(mask, 9);
        double v = 0.5 + static_cast<double>(inst.raw_objective(x)) /
                             (2.0 * inst.m_abs());
        if (v > best) {
            best = v;
            arg = mask;
        }
    }
    CHECK(r.value == doctest::Approx(best).epsilon(1e-12));
    std::vector<int> xb = bits_to_pm1(r.best_assignment, 9);
    CHECK(0.5 + static_cast<double>(inst.raw_objective(xb)) /
              (2.0 * inst.m_abs()) == doctest::Approx(best).epsilon(1e-12));
    (void)arg;
}

TEST_CASE("csp optimizer cross-checked") {
    CspInstance inst = gen_csp(7, 2, {0, 1, 1, 0}, 15, 4);
    REQUIRE(!inst.clauses.empty());
    BruteResult r = brute_optimum(inst);
    double best = -1;
    for (std::uint64_t mask = 0; mask < (1ull << 7); ++mask)
        best = std::max(best, inst.objective(bits_to_pm1(mask, 7)));
    CHECK(r.value == doctest::Approx(best).epsilon(1e-12));
    CHECK(inst.objective(bits_to_pm1(r.best_assignment, 7)) ==
          doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("exhaustive search refuses oversized instances") {
    CHECK_THROWS_AS(brute_optimum(make_complete(27)), std::invalid_argument);
    XorInstance inst;
    inst.n = 30;
    inst.k = 2;
    inst.add_term(1 * 30 + 0, 1);
    CHECK_THROWS_AS(brute_optimum(inst), std::invalid_argument);
}

TEST_CASE("eigenvalue bounds on closed forms") {
    EigBounds c4 = eig_bounds(make_cycle(4));
    CHECK(c4.walk_bound == doctest::Approx(1.0).epsilon(1e-9));

    EigBounds k3 = eig_bounds(make_complete(3));
    CHECK(k3.walk_bound == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(k3.laplacian_bound == doctest::Approx(0.75).epsilon(1e-9));

    for (int n : {4, 8, 16}) {
        EigBounds kn = eig_bounds(make_complete(n));
        CHECK(kn.walk_bound ==
              doctest::Approx(0.5 + 0.5 / (n - 1)).epsilon(1e-9));
    }
}

TEST_CASE("the two eigenvalue bounds coincide on regular graphs") {
    SignedGraph g = gen_regular(12, 3, 8);
    EigBounds b = eig_bounds(g);
    CHECK(b.laplacian_bound == doctest::Approx(b.walk_bound).epsilon(1e-9));
    // both dominate the exact optimum
    double opt = brute_optimum(g).value;
    CHECK(opt <= b.laplacian_bound + 1e-9);
    CHECK(opt <= b.walk_bound + 1e-9);
}

TEST_CASE("regular generator hits the degree exactly") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        SignedGraph g = gen_regular(10, 4, seed);
        for (int v = 0; v < g.n(); ++v) CHECK(g.deg()[v] == 4);
    }
    std::string warn;
    SignedGraph s = gen_regular(16, 3, 5, true, &warn);
    CHECK(warn.empty());
    for (const auto& e : s.edges()) {
        CHECK(e.u != e.v);
        CHECK(e.mult == 1);
    }
    for (int v = 0; v < s.n(); ++v) CHECK(s.deg()[v] == 3);
}

TEST_CASE("generators are reproducible") {
    SignedGraph a = gen_regular(14, 3, 77);
    SignedGraph b = gen_regular(14, 3, 77);
    REQUIRE(a.edges().size() == b.edges().size());
    for (std::size_t i = 0; i < a.edges().size(); ++i) {
        CHECK(a.edges()[i].u == b.edges()[i].u);
        CHECK(a.edges()[i].v == b.edges()[i].v);
        CHECK(a.edges()[i].mult == b.edges()[i].mult);
    }
    SignedGraph c = gen_gnp(15, 4.0, 3);
    SignedGraph d = gen_gnp(15, 4.0, 3);
    CHECK(c.edges().size() == d.edges().size());
}

TEST_CASE("sparse random graphs keep every vertex covered") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        SignedGraph g = gen_gnp(20, 2.0, seed);
        for (int v = 0; v < g.n(); ++v) CHECK(g.deg()[v] >= 1);
    }
}

TEST_CASE("experiment driver end to end") {
    ExperimentConfig cfg;
    cfg.generator = "complete";
    cfg.n = 8;
    cfg.kind = "maxcut";
    cfg.k = 3;
    cfg.ell = 1;
    cfg.seed = 1;
    Experiment e = run_experiment(cfg);
    CHECK(e.error.empty());
    CHECK(e.rho == doctest::Approx(1.0 / 7).epsilon(1e-9));
    CHECK(e.soundness_ok);
    REQUIRE(e.optimum.has_value());
    CHECK(*e.optimum <= e.cert_bound + 1e-9);
    CHECK(*e.optimum <= e.eig.walk_bound + 1e-9);
    REQUIRE(e.feas_value.has_value());
    CHECK(*e.feas_value > 0.5);
    CHECK(*e.feas_value <= *e.optimum + 1e-9);

    // CSV row matches the header shape
    std::string header = experiment_csv_header();
    std::string row = to_csv(e);
    CHECK(std::count(header.begin(), header.end(), ',') ==
          std::count(row.begin(), row.end(), ','));
}

TEST_CASE("experiment driver epsilon-driven parameters") {
    ExperimentConfig cfg;
    cfg.generator = "complete";
    cfg.n = 16;
    cfg.kind = "maxcut";
    cfg.epsilon = 0.25;  // rho(K') = 1/15 < eps, selection picks ell = 2, k = 256
    cfg.seed = 2;
    Experiment e = run_experiment(cfg);
    CHECK(e.error.empty());
    CHECK(e.soundness_ok);
}

TEST_CASE("experiment driver survives generator failure") {
    ExperimentConfig cfg;
    cfg.generator = "nonsense";
    cfg.n = 8;
    Experiment e = run_experiment(cfg);
    CHECK_FALSE(e.error.empty());
}
