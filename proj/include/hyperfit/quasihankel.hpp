#pragma once

#include <vector>

#include "hyperfit/moments.hpp"
#include "hyperfit/multidegree.hpp"

namespace hyperfit {

/// Symmetric m x m matrix with (k,l) entry B_{alpha(k)+alpha(l)}; rows and
/// columns are labelled by the basis multidegrees.
struct QuasiHankelMatrix {
    Eigen::MatrixXd entries;
    MultidegreeMatrix basis;
};

/// Requires `b` complete on A + A.
QuasiHankelMatrix build(const MultidegreeMatrix& a, const MomentArray& b);

/// Psi(D) = V V^T built from raw moments on A + A.
QuasiHankelMatrix psi_matrix(const MultidegreeMatrix& a, const PointSet& points);

/// Psi_A(D, sigma) = H_A(M^(sigma,s)).
QuasiHankelMatrix adjusted_psi(const MultidegreeMatrix& a, const AdjustedMomentBasis& basis, double sigma);

/// Psi_0 ... Psi_r with Psi_k = H_A(M^(k)).
std::vector<QuasiHankelMatrix> psi_coefficients(const MultidegreeMatrix& a, const AdjustedMomentBasis& basis);

/// Raw moments plus basis arrays for A with noise confined to the first s
/// coordinates (covariance sigma^2 J_s).
AdjustedMomentBasis adjusted_basis_for(const MultidegreeMatrix& a, const PointSet& points, int s);

}  // namespace hyperfit
