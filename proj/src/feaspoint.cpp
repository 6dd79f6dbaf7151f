#include "sacert/feaspoint.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sacert/rng.hpp"

namespace sacert {

double f_cmm(double z) {
    if (z < -1.0 || z > 1.0) throw std::invalid_argument("f argument outside [-1,1]");
    return 1.0 - (2.0 / std::numbers::pi) * std::acos(z);
}

namespace {

Eigen::MatrixXd unit_constraint_matrix(const XorInstance& inst) {
    if (inst.k != 2) throw std::invalid_argument("arity-2 instance required");
    const std::uint64_t N = inst.n;
    std::map<std::pair<int, int>, long long> merged;
    for (const auto& [key, w] : inst.terms) {
        int i = static_cast<int>(key % N), j = static_cast<int>(key / N);
        if (i == j) throw std::invalid_argument("loop constraints not supported");
        auto p = std::minmax(i, j);
        merged[{p.first, p.second}] += w;
    }
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(inst.n, inst.n);
    for (const auto& [pair, v] : merged) {
        if (v == 0) continue;
        if (v != 1 && v != -1)
            throw std::invalid_argument("constraint weights must merge to +/-1");
        b(pair.first, pair.second) = static_cast<double>(v);
        b(pair.second, pair.first) = static_cast<double>(v);
    }
    return b;
}

}  // namespace

PseudoMoments cmm_point(const XorInstance& inst, int R) {
    if (R < 1) throw std::invalid_argument("round count must be >= 1");
    PseudoMoments pm;
    pm.R = R;
    pm.r = 2 * R + 3;
    pm.n = inst.n;
    pm.b = unit_constraint_matrix(inst);
    pm.values = Eigen::MatrixXd::Zero(pm.n, pm.n);
    for (int i = 0; i < pm.n; ++i) {
        pm.values(i, i) = 1.0;
        for (int j = i + 1; j < pm.n; ++j) {
            // f(0) = 0, so unconstrained pairs stay at 0.
            double v = pm.b(i, j) == 0.0 ? 0.0 : f_cmm(pm.b(i, j) / pm.r);
            pm.values(i, j) = v;
            pm.values(j, i) = v;
        }
    }
    return pm;
}

EmbedReport check_embeddability(const XorInstance& inst, int R,
                                std::uint64_t seed,
                                std::uint64_t sample_subsets) {
    if (R < 1) throw std::invalid_argument("round count must be >= 1");
    EmbedReport rep;
    rep.r = 2 * R + 3;
    Eigen::MatrixXd b = unit_constraint_matrix(inst);
    const int n = static_cast<int>(b.rows());

    for (int i = 0; i < n; ++i) {
        double deg = b.row(i).cwiseAbs().sum();
        double capped = std::fmin(deg, rep.r - 1.0) / rep.r;
        rep.max_row_sum = std::fmax(rep.max_row_sum, capped);
    }
    rep.automatic_ok = rep.max_row_sum <= 1.0 + 1e-12;
    rep.boundary = std::fabs(rep.max_row_sum - 1.0) <= 1e-12;

    auto check_subset = [&](const std::vector<int>& s) {
        const int sz = static_cast<int>(s.size());
        Eigen::MatrixXd M = Eigen::MatrixXd::Identity(sz, sz);
        for (int a = 0; a < sz; ++a)
            for (int c = 0; c < sz; ++c)
                if (a != c) M(a, c) = b(s[a], s[c]) / rep.r;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
        double lo = es.eigenvalues().minCoeff();
        if (rep.subsets_checked == 0)
            rep.min_subset_eig = lo;
        else
            rep.min_subset_eig = std::fmin(rep.min_subset_eig, lo);
        ++rep.subsets_checked;
    };

    const int cap = std::min(n, rep.r);
    // total nonempty subsets of size <= cap
    double total = 0;
    {
        double c = 1;
        for (int sz = 1; sz <= cap && total <= 5000; ++sz) {
            c = c * (n - sz + 1) / sz;
            total += c;
        }
    }
    if (total <= 5000) {
        rep.exhaustive = true;
        std::vector<int> s;
        // enumerate subsets of size <= cap by recursion
        auto rec = [&](auto&& self, int start) -> void {
            if (!s.empty()) check_subset(s);
            if (static_cast<int>(s.size()) == cap) return;
            for (int v = start; v < n; ++v) {
                s.push_back(v);
                self(self, v + 1);
                s.pop_back();
            }
        };
        rec(rec, 0);
    } else {
        std::mt19937_64 rng = make_rng(seed);
        std::vector<int> ids(n);
        for (int i = 0; i < n; ++i) ids[i] = i;
        for (std::uint64_t t = 0; t < sample_subsets; ++t) {
            std::shuffle(ids.begin(), ids.end(), rng);
            std::vector<int> s(ids.begin(), ids.begin() + cap);
            check_subset(s);
        }
    }
    // PSD up to numerical noise; exact boundary subsets are singular.
    rep.pass = rep.automatic_ok && rep.min_subset_eig >= -1e-9;
    return rep;
}

double feasible_value(const XorInstance& inst, const PseudoMoments& pm) {
    const std::uint64_t N = inst.n;
    double sum = 0;
    long long m = 0;
    for (const auto& [key, w] : inst.terms) {
        int i = static_cast<int>(key % N), j = static_cast<int>(key / N);
        sum += static_cast<double>(w) * pm.values(i, j);
        m += std::llabs(w);
    }
    if (m == 0) throw std::invalid_argument("empty instance");
    double value = 0.5 + 0.5 * sum / m;
    double floor_v = 0.5 + (1.0 / std::numbers::pi) / pm.r;
    if (value < floor_v - 1e-12)
        throw std::logic_error("feasible point fell below its guaranteed value");
    return value;
}

FReport f_properties(const std::vector<double>& grid) {
    FReport rep;
    rep.min_margin = 1.0;
    bool have_pos = false;
    for (double z : grid) {
        if (z < -1.0 || z > 1.0) throw std::invalid_argument("grid outside [-1,1]");
        rep.max_odd_residual =
            std::fmax(rep.max_odd_residual, std::fabs(f_cmm(z) + f_cmm(-z)));
        double az = std::fabs(z);
        rep.min_margin =
            std::fmin(rep.min_margin, f_cmm(az) - (2.0 / std::numbers::pi) * az);
        have_pos = true;
    }
    if (!have_pos) throw std::invalid_argument("empty grid");

    rep.monotone_ok = true;
    const double h = 1e-6;
    for (double z = 0.01; z < 0.995; z += 0.01) {
        double g1 = f_cmm(z + h) - (2.0 / std::numbers::pi) * (z + h);
        double g0 = f_cmm(z) - (2.0 / std::numbers::pi) * z;
        if (g1 - g0 <= 0) rep.monotone_ok = false;
    }
    rep.pass = rep.max_odd_residual <= 1e-12 && rep.min_margin >= -1e-12 &&
               rep.monotone_ok;
    return rep;
}

}  // namespace sacert
