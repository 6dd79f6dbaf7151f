#include "sacert/spider.hpp"

#include <cmath>
#include <stdexcept>

namespace sacert {

Spider build_spider(int k, int ell) {
    if (k < 1 || ell < 1)
        throw std::invalid_argument("spider parameters must be positive");
    Spider sp;
    sp.k = k;
    sp.ell = ell;
    const int n = sp.size();

    // depth[v] and leg[v]; root has leg -1.
    std::vector<int> depth(n, 0), leg(n, -1);
    sp.levels.assign(ell + 1, {});
    sp.levels[0].push_back(0);
    for (int j = 0; j < k; ++j)
        for (int d = 1; d <= ell; ++d) {
            int id = 1 + j * ell + (d - 1);
            depth[id] = d;
            leg[id] = j;
            sp.levels[d].push_back(id);
        }

    sp.dist.resize(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b)
                sp.dist(a, b) = 0;
            else if (leg[a] == leg[b])
                sp.dist(a, b) = std::abs(depth[a] - depth[b]);
            else
                sp.dist(a, b) = depth[a] + depth[b];
        }
    return sp;
}

Eigen::MatrixXd distance_matrix(const Spider& sp, int d) {
    const int n = sp.size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (sp.dist(a, b) == d) A(a, b) = 1;
    return A;
}

SpiderMatrix build_psi(const Spider& sp, double alpha) {
    if (sp.k < 2) throw std::invalid_argument("build_psi requires k >= 2");
    if (alpha == 1.0) throw std::invalid_argument("build_psi requires alpha != 1");
    const int n = sp.size();
    const int k = sp.k, ell = sp.ell;

    SpiderMatrix sm;
    sm.spider = sp;
    sm.alpha = alpha;

    sm.mu.assign(ell + 1, Eigen::VectorXd::Zero(n));
    for (int t = 0; t <= ell; ++t) {
        double coef = std::pow(alpha, t) / sp.levels[t].size();
        for (int i : sp.levels[t]) sm.mu[t][i] = coef;
    }

    sm.chi = sm.mu[0] + sm.mu[1];
    sm.psi.clear();
    for (int t = 0; t < ell; ++t) {
        Eigen::VectorXd p = sm.mu[t];
        if (t + 2 <= ell) p -= sm.mu[t + 2];
        sm.psi.push_back(p);
    }

    sm.eta = (1.0 / (k - 1)) *
             ((std::pow(alpha, 2 * ell - 2) - 1.0) / (alpha * alpha - 1.0));

    Eigen::MatrixXd tilde = sm.chi * sm.chi.transpose();
    for (const auto& p : sm.psi) tilde += p * p.transpose();
    sm.Psi = 0.5 * tilde + sm.eta * (sm.mu[1] * sm.mu[1].transpose());

    sm.inner.assign(2 * ell + 1, 0.0);
    for (int d = 0; d <= 2 * ell; ++d)
        sm.inner[d] = (sm.Psi.cwiseProduct(distance_matrix(sp, d))).sum();
    return sm;
}

double psi_inner_formula(int k, int ell, double alpha, int d) {
    double a2l = std::pow(alpha, 2 * ell);
    if (d == 0) {
        double tail = 0;
        if (ell > 1)
            tail = (1.0 / (k - 1)) * ((a2l - alpha * alpha) / (alpha * alpha - 1.0));
        return 1.0 + a2l / (2.0 * k) + tail;
    }
    if (d == 1) return alpha;
    if (d == 2 * ell) return 0.5 * (1.0 - 1.0 / k) * a2l;
    return 0.0;
}

PsiReport verify_psi(const SpiderMatrix& sm, const Tol& tol) {
    PsiReport rep;
    const Spider& sp = sm.spider;
    const int twol = 2 * sp.ell;

    rep.identities_ok = true;
    rep.residual.assign(twol + 1, 0.0);
    for (int d = 0; d <= twol; ++d) {
        double fresh = (sm.Psi.cwiseProduct(distance_matrix(sp, d))).sum();
        double want = psi_inner_formula(sp.k, sp.ell, sm.alpha, d);
        rep.residual[d] = std::fabs(fresh - want);
        bool ok = (want == 0.0) ? rep.residual[d] <= 1e-9
                                : tol.close(fresh, want);
        if (!ok) rep.identities_ok = false;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sm.Psi, Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    rep.max_eigenvalue = es.eigenvalues().maxCoeff();
    rep.psd_ok = rep.min_eigenvalue >= -1e-9 * std::fmax(rep.max_eigenvalue, 1.0);

    double alpha_cor = std::exp(std::log(static_cast<double>(sp.k)) / (2.0 * sp.ell));
    rep.corollary_applicable =
        sp.k >= std::pow(3.0, sp.ell) - 1e-9 && tol.close(sm.alpha, alpha_cor);
    if (rep.corollary_applicable) {
        double c0 = sm.inner[0];
        rep.corollary_ok = (c0 >= 1.5 - 1e-9) && (c0 <= 2.0 + 1e-9);
    }
    rep.pass = rep.identities_ok && rep.psd_ok && rep.corollary_ok;
    return rep;
}

IntermediateInnerProducts intermediate_inner_products(const Spider& sp, double alpha) {
    const int ell = sp.ell, k = sp.k;
    IntermediateInnerProducts out;
    out.value.assign(ell + 1, std::vector<std::vector<double>>(
                                  ell + 1, std::vector<double>(2 * ell + 1, 0.0)));
    out.predicted = out.value;

    std::vector<Eigen::VectorXd> mu(ell + 1, Eigen::VectorXd::Zero(sp.size()));
    for (int t = 0; t <= ell; ++t) {
        double coef = std::pow(alpha, t) / sp.levels[t].size();
        for (int i : sp.levels[t]) mu[t][i] = coef;
    }

    for (int d = 0; d <= 2 * ell; ++d) {
        Eigen::MatrixXd A = distance_matrix(sp, d);
        for (int s = 0; s <= ell; ++s)
            for (int t = 0; t <= ell; ++t) {
                out.value[s][t][d] = mu[s].dot(A * mu[t]);
                double pred = 0;
                double ast = std::pow(alpha, s + t);
                if (s == 0 || t == 0) {
                    int other = s + t;  // one of them is zero
                    if (d == other) pred = std::pow(alpha, other);
                } else {
                    if (d == std::abs(s - t))
                        pred = ast / k;
                    else if (d == s + t)
                        pred = (1.0 - 1.0 / k) * ast;
                }
                // Same-level pairs on one leg coincide, so |s-t|=0 and s+t
                // collapse when s == t; the d == |s-t| case then contributes
                // the diagonal 1/k mass and d == 2s the off-leg mass, which
                // the two branches above already cover.
                out.predicted[s][t][d] = pred;
                out.max_residual = std::fmax(
                    out.max_residual, std::fabs(out.value[s][t][d] - pred));
            }
    }
    return out;
}

}  // namespace sacert
