#ifndef SACERT_SPIDER_HPP
#define SACERT_SPIDER_HPP

#include <Eigen/Dense>
#include <vector>

#include "sacert/tolerance.hpp"

namespace sacert {

// (k,ell)-spider: k paths of length ell glued at a root.  Vertex 0 is the
// root; leg j, depth d (1-based) is vertex 1 + j*ell + (d-1).
struct Spider {
    int k = 0;
    int ell = 0;
    Eigen::MatrixXi dist;                  // pairwise tree distances
    std::vector<std::vector<int>> levels;  // levels[t] = vertices at depth t

    int size() const { return k * ell + 1; }
    int diameter() const { return 2 * ell; }
};

Spider build_spider(int k, int ell);

// Distance-d adjacency matrix A^(d) of the spider.
Eigen::MatrixXd distance_matrix(const Spider& sp, int d);

// The PSD quadratic-form matrix on the spider together with its building
// vectors:
//   mu_t  = avg_{i in level t} alpha^t e_i,
//   chi   = mu_0 + mu_1,
//   psi_t = mu_t - mu_{t+2}  (mu_{ell+1} = 0),
//   Psi   = 1/2 (chi chi^T + sum psi_t psi_t^T) + eta mu_1 mu_1^T,
//   eta   = (1/(k-1)) (alpha^{2ell-2} - 1)/(alpha^2 - 1).
struct SpiderMatrix {
    Spider spider;
    double alpha = 0;
    std::vector<Eigen::VectorXd> mu;   // mu_0..mu_ell
    Eigen::VectorXd chi;
    std::vector<Eigen::VectorXd> psi;  // psi_0..psi_{ell-1}
    double eta = 0;
    Eigen::MatrixXd Psi;
    std::vector<double> inner;  // <Psi, A^(d)> for d = 0..2ell, by Frobenius product
};

// Requires k >= 2 and alpha != 1; throws std::invalid_argument otherwise.
SpiderMatrix build_psi(const Spider& sp, double alpha);

// Closed-form target values of <Psi, A^(d)>:
//   d = 0:       1 + alpha^{2ell}/(2k) + (1/(k-1)) (alpha^{2ell}-alpha^2)/(alpha^2-1)
//   d = 1:       alpha
//   1 < d < 2l:  0
//   d = 2l:      (1 - 1/k)/2 * alpha^{2ell}
double psi_inner_formula(int k, int ell, double alpha, int d);

struct PsiReport {
    std::vector<double> residual;    // |inner[d] - formula(d)| per d
    double min_eigenvalue = 0;
    double max_eigenvalue = 0;
    bool psd_ok = false;
    bool identities_ok = false;
    bool corollary_applicable = false;  // k >= 3^ell and alpha = k^{1/2ell}
    bool corollary_ok = true;           // 3/2 <= <Psi,A^(0)> <= 2 when applicable
    bool pass = false;
};

// Recomputes every <Psi, A^(d)> from scratch and checks it against the
// closed forms; also eigensolves Psi for PSD-ness.
PsiReport verify_psi(const SpiderMatrix& sm, const Tol& tol = Tol::defaults());

// mu_s^T A^(d) mu_t for all 0 <= s,t <= ell, 0 <= d <= 2 ell, indexed
// [s][t][d], together with the case-analysis prediction.
struct IntermediateInnerProducts {
    std::vector<std::vector<std::vector<double>>> value;
    std::vector<std::vector<std::vector<double>>> predicted;
    double max_residual = 0;
};

IntermediateInnerProducts intermediate_inner_products(const Spider& sp, double alpha);

}  // namespace sacert

#endif
