#ifndef SACERT_CERTIFIER_HPP
#define SACERT_CERTIFIER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sacert/graph.hpp"
#include "sacert/spider.hpp"
#include "sacert/tolerance.hpp"

namespace sacert {

enum class CertKind { TwoXor, MaxCut };

// Square-completion witness for the 2-local inequality
//   E_{u~pi} sum_v M_{uv} X_u X_v <= gamma E_u X_u^2,  gamma = pi_*^{-1/2} ||M||_2.
// Each pair (u,v) uses M_{uv} X_u X_v <= a_uv X_u^2 + b_uv X_v^2 with
// a_uv = M_{uv}^2/(2 gamma pi(v)), b_uv = gamma pi(v)/2; the slack is the
// square (M_{uv}/sqrt(2 gamma pi(v)) X_u - sqrt(gamma pi(v)/2) X_v)^2.
struct WackTerm {
    Eigen::MatrixXd M;
    double spectral_norm = 0;  // Euclidean ||M||_2
    double gamma = 0;
    Eigen::MatrixXd a;  // a_uv
    Eigen::MatrixXd b;  // b_uv
    double max_square_identity_residual = 0;  // max |4 a_uv b_uv - M_uv^2|
    double max_row_excess = 0;  // max_u sum_v M_uv^2 - ||M||_2^2 (should be <= 0)
    bool row_condition_ok = true;
};

WackTerm wack_bound(const Eigen::MatrixXd& M, const Eigen::VectorXd& pi);

struct Certificate {
    CertKind kind = CertKind::TwoXor;
    long long k = 0;
    int ell = 0;
    long long locality = 0;  // R = k*ell + 1 for 2-XOR, 2R for max-cut
    double alpha = 0;
    double c0 = 0;           // <Psi, A^(0)>
    double rho = 0;          // measured spectral radius (Kbar or K - J)
    double pi_star = 0;
    double beta_paper = 0;   // (k pi_*^{-1/2} / 2 k^{1/2l}) rho^{2l} + 2/k^{1/2l}
    double beta_sharp = 0;   // (c0 + (k-1)/2 pi_*^{-1/2} rho^{2l}) / k^{1/2l}
    double bound_obj = 0;    // 1/2 + beta_paper/2
    double bound_obj_sharp = 0;
    bool vacuous = false;    // bound >= 1; returned but flagged
    double theta = 0;        // max-cut only
    double iota = 0;         // max-cut only
    std::optional<SpiderMatrix> psi;  // materialized when k*ell+1 is small
    std::optional<WackTerm> wack;     // materialized alongside psi
};

// Round/locality selection for a target refutation strength epsilon:
//   ell = max(1, ceil(1/4 log(eps^2 pi_*) / log(rho/eps))),
//   k = ceil((1/eps)^{2 ell}), R = k*ell + 1.
// Requires rho < eps; guarantees beta_paper <= (5/2) eps.
struct SelectedParams {
    int ell = 0;
    long long k = 0;
    long long R = 0;
};
SelectedParams select_parameters(double epsilon, double pi_star, double rho);

// Certificate for "|<X, Kbar X>_pi| <= beta", i.e. 2-XOR OBJ <= 1/2 + beta/2.
// Requires k >= 3^ell.  The dense spider matrix (and wack witness) is built
// when k*ell+1 <= max_dense_spider, otherwise c0 comes from the closed form.
Certificate certify_2xor(const SignedGraph& g, int k, int ell,
                         int max_dense_spider = 20000);

// Same construction with an explicitly chosen spider shape and no k >= 3^ell
// strength requirement (the aggregation identity holds for any k >= 2); the
// resulting beta may be weak or vacuous.
Certificate build_certificate(const SignedGraph& g, CertKind kind, int k,
                              int ell, int max_dense_spider = 20000);
Certificate certify_2xor(const SignedGraph& g, double epsilon,
                         int max_dense_spider = 20000);

// Certificate for "lambda_min(K) >= -beta", i.e. max-cut OBJ <= 1/2 + beta/2;
// uses rho(K - J) and the two-walk block construction with theta chosen so
// that c0 + k^{1/2l} + (k-1)/2 = iota (k-1)/2.
Certificate certify_maxcut(const SignedGraph& g, int k, int ell,
                           int max_dense_spider = 20000);
Certificate certify_maxcut(const SignedGraph& g, double epsilon,
                           int max_dense_spider = 20000);

enum class VerifyMode { Exhaustive, Sampled };

struct VerificationReport {
    bool psi_psd = false;
    double psi_min_eigenvalue = 0;
    double aggregation_residual = 0;  // max-entry residual of the Y identity
    double aggregation_tolerance = 0;
    bool aggregation_ok = false;
    double wack_domination_min_eig = 0;  // min eig of gamma Pi - sym(Pi M)
    double wack_square_residual = 0;
    double wack_row_margin = 0;  // min_u (gamma^2/... ) reduction slack
    bool wack_ok = false;
    double beta_chain_residual = 0;
    bool beta_chain_ok = false;
    double theta_residual = 0;       // max-cut only
    double kj_identity_residual = 0; // max-cut only
    bool maxcut_bookkeeping_ok = true;
    std::uint64_t samples_used = 0;
    bool pass = false;
    std::string note;
};

// Checks the algebraic identities that justify the certificate:
//  (a) Psi PSD, (b) the aggregation identity
//      sum_d <Psi,A^(d)> sym(Pi Kbar^d) = E over spider walks of the
//      pushed-forward local form, (c) the wack domination
//      gamma Pi - sym(Pi M) >= 0 together with its square/row reduction,
//  (d) the scalar chain reproducing beta, and (e) for max-cut the theta/iota
//      bookkeeping and Pi K^{2l} - pi pi^T = Pi (K-J)^{2l}.
// Exhaustive mode enumerates spider homomorphisms (tiny graphs only);
// sampled mode uses Monte Carlo with 'samples' walks and a 4-standard-error
// acceptance band, split deterministically across 'jobs' workers.
VerificationReport verify_certificate(const Certificate& cert,
                                      const SignedGraph& g, VerifyMode mode,
                                      std::uint64_t samples = 1000000,
                                      std::uint64_t seed = 0, int jobs = 1,
                                      const Tol& tol = Tol::defaults());

}  // namespace sacert

#endif
