#ifndef SACERT_FEASPOINT_HPP
#define SACERT_FEASPOINT_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sacert/csp.hpp"

namespace sacert {

// f(z) = 1 - (2/pi) arccos(z); odd, f(z) >= (2/pi) z on [0,1].
double f_cmm(double z);

// Degree-2 pseudo-moments E~[x_i x_j] = f(b_ij / r), r = 2R + 3, with
// E~[x_i^2] = 1.  b is the +/-1 constraint matrix (0 on unconstrained pairs).
struct PseudoMoments {
    int R = 0;
    int r = 0;
    int n = 0;
    Eigen::MatrixXd b;
    Eigen::MatrixXd values;
};

// Requires unit weights: every constrained pair must carry b_ij in {-1,+1}
// after merging both orientations; loops are rejected.
PseudoMoments cmm_point(const XorInstance& inst, int R);

struct EmbedReport {
    int r = 0;
    double max_row_sum = 0;      // max_i min(deg_i, r-1) / r
    bool automatic_ok = false;   // max_row_sum <= 1, guaranteed by |S| <= r
    bool boundary = false;       // row sum exactly 1 somewhere (singular M_S)
    std::uint64_t subsets_checked = 0;
    bool exhaustive = false;
    double min_subset_eig = 0;   // over all checked M_S = Id + B_S
    bool pass = false;
};

// Hypothesis of the metric-embedding theorem: every <= r-point submatrix
// M_S = Id + B_S (entries b_ij / r off-diagonal) is PSD.  Exhausts all
// subsets when few, otherwise samples seeded random ones.
EmbedReport check_embeddability(const XorInstance& inst, int R,
                                std::uint64_t seed = 0,
                                std::uint64_t sample_subsets = 200);

// SA objective of the point: 1/2 + (1/2m) sum b_ij E~[x_i x_j] = 1/2 + f(1/r)/2.
// Asserts the value is >= 1/2 + (1/pi)/r.
double feasible_value(const XorInstance& inst, const PseudoMoments& pm);

struct FReport {
    double max_odd_residual = 0;    // |f(z) + f(-z)|
    double min_margin = 0;          // min over z in [0,1] of f(z) - (2/pi) z
    bool monotone_ok = false;       // finite-difference slope of the margin
    bool pass = false;
};

FReport f_properties(const std::vector<double>& grid);

}  // namespace sacert

#endif
