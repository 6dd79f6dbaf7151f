#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sacert/csp.hpp"
#include "sacert/feaspoint.hpp"

using namespace sacert;

namespace {

XorInstance unit_xor(int n, std::vector<std::tuple<int, int, long long>> terms) {
    XorInstance inst;
    inst.n = n;
    inst.k = 2;
    for (auto [a, b, w] : terms)
        inst.add_term(encode_multiset({a, b}, n), w);
    return inst;
}

}  // namespace

TEST_CASE("correlation map at the anchors") {
    CHECK(f_cmm(0.0) == doctest::Approx(0.0));
    CHECK(f_cmm(1.0) == doctest::Approx(1.0));
    CHECK(f_cmm(-1.0) == doctest::Approx(-1.0));
    double f03 = 1.0 - (2.0 / std::numbers::pi) * std::acos(0.3);
    CHECK(f_cmm(0.3) == doctest::Approx(f03).epsilon(1e-12));
    CHECK(f03 >= (2.0 / std::numbers::pi) * 0.3);
    CHECK_THROWS_AS(f_cmm(1.5), std::invalid_argument);
}

TEST_CASE("map properties on a fine grid") {
    std::vector<double> grid;
    for (int i = -1000; i <= 1000; ++i) grid.push_back(i / 1000.0);
    FReport rep = f_properties(grid);
    CHECK(rep.max_odd_residual <= 1e-12);
    CHECK(rep.min_margin >= -1e-12);
    CHECK(rep.monotone_ok);
    CHECK(rep.pass);
}

TEST_CASE("single edge pseudo-moments") {
    XorInstance inst = unit_xor(2, {{0, 1, 1}});
    PseudoMoments pm = cmm_point(inst, 1);
    CHECK(pm.r == 5);
    double want = 1.0 - (2.0 / std::numbers::pi) * std::acos(0.2);
    CHECK(pm.values(0, 1) == doctest::Approx(want).epsilon(1e-12));
    CHECK(pm.values(0, 0) == doctest::Approx(1.0));
    CHECK(pm.values(1, 1) == doctest::Approx(1.0));

    // swapping the sign negates the off-diagonal moment
    XorInstance neg = unit_xor(2, {{0, 1, -1}});
    PseudoMoments pn = cmm_point(neg, 1);
    CHECK(pn.values(0, 1) == doctest::Approx(-want).epsilon(1e-12));
}

TEST_CASE("unconstrained pairs stay uncorrelated") {
    XorInstance inst = unit_xor(3, {{0, 1, 1}, {1, 2, 1}});
    PseudoMoments pm = cmm_point(inst, 2);
    CHECK(pm.values(0, 2) == 0.0);
    CHECK(pm.b(0, 2) == 0.0);
}

TEST_CASE("point construction demands unit weights") {
    CHECK_THROWS_AS(cmm_point(unit_xor(2, {{0, 1, 2}}), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(cmm_point(unit_xor(2, {{0, 0, 1}, {0, 1, 1}}), 1),
                    std::invalid_argument);
    // both orientations merging to +/-2 also fail
    CHECK_THROWS_AS(cmm_point(unit_xor(2, {{0, 1, 1}, {1, 0, 1}}), 1),
                    std::invalid_argument);
}

TEST_CASE("complete graph embeddability is exhausted") {
    std::vector<std::tuple<int, int, long long>> terms;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) terms.push_back({i, j, 1});
    EmbedReport rep = check_embeddability(unit_xor(5, terms), 1);
    CHECK(rep.r == 5);
    CHECK(rep.exhaustive);
    CHECK(rep.subsets_checked == 31);  // nonempty subsets of five points
    CHECK(rep.max_row_sum == doctest::Approx(0.8));
    CHECK(rep.automatic_ok);
    // the full submatrix Id + (J - Id)/5 has least eigenvalue 4/5
    CHECK(rep.min_subset_eig == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(rep.pass);
}

TEST_CASE("single edge submatrix eigenvalues") {
    EmbedReport rep = check_embeddability(unit_xor(2, {{0, 1, 1}}), 1);
    CHECK(rep.exhaustive);
    CHECK(rep.min_subset_eig == doctest::Approx(0.8).epsilon(1e-12));  // 1 - 1/5
    CHECK(rep.max_row_sum == doctest::Approx(0.2));
    CHECK(rep.pass);
}

TEST_CASE("large instances fall back to sampling") {
    std::vector<std::tuple<int, int, long long>> terms;
    const int n = 40;
    for (int i = 0; i < n; ++i) terms.push_back({i, (i + 1) % n, 1});
    EmbedReport rep = check_embeddability(unit_xor(n, terms), 1, 3, 50);
    CHECK_FALSE(rep.exhaustive);
    CHECK(rep.subsets_checked == 50);
    CHECK(rep.min_subset_eig >= -1e-9);
    CHECK(rep.pass);
}

TEST_CASE("objective value of the point") {
    XorInstance inst = unit_xor(2, {{0, 1, 1}});
    PseudoMoments pm = cmm_point(inst, 1);
    double v = feasible_value(inst, pm);
    double f15 = 1.0 - (2.0 / std::numbers::pi) * std::acos(0.2);
    CHECK(v == doctest::Approx(0.5 + 0.5 * f15).epsilon(1e-12));
    CHECK(v >= 0.5 + (1.0 / std::numbers::pi) / 5);
    // satisfying every unit constraint a little: same value on mixed signs
    XorInstance mixed = unit_xor(4, {{0, 1, 1}, {1, 2, -1}, {2, 3, 1}});
    double vm = feasible_value(mixed, cmm_point(mixed, 1));
    CHECK(vm == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("advantage decays with the locality radius") {
    XorInstance inst = unit_xor(2, {{0, 1, 1}});
    double prev = 1.0;
    for (int R : {1, 10, 100, 1000}) {
        double v = feasible_value(inst, cmm_point(inst, R));
        CHECK(v > 0.5);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev - 0.5 <= 1e-3);
}

TEST_CASE("guaranteed advantage dominates the coarse estimate") {
    // (1/pi)/(2R+3) >= 1/(2 pi R) - 3/(2 pi R (2R+3)) and the latter beats
    // the crude 1/(pi R) - 1/(2 R^2) floor for every R
    for (int R = 1; R <= 10000; R = (R < 100 ? R + 1 : R * 3)) {
        double lhs = 0.5 + (2.0 / std::numbers::pi) / (2.0 * R + 3.0);
        double rhs = 0.5 + 1.0 / (std::numbers::pi * R) - 1.0 / (2.0 * R * R);
        CHECK(lhs >= rhs - 1e-15);
    }
}
