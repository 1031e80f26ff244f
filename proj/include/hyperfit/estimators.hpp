#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperfit/multidegree.hpp"
#include "hyperfit/spectral.hpp"

namespace hyperfit {

enum class NormKind { euclidean, bombieri, custom };
const char* to_string(NormKind k);

/// Weights of ||theta||_w^2 = sum_j w_j theta_j^2.
struct NormWeights {
    Eigen::VectorXd w;
    NormKind kind = NormKind::euclidean;

    static NormWeights euclidean(std::size_t m);
    /// Throws ArgumentError unless every weight is positive.
    static NormWeights custom(Eigen::VectorXd w);
};

/// w_j = alpha_1! ... alpha_q! / |alpha|!
NormWeights bombieri_weights(const MultidegreeMatrix& a);

/// Sigma_0 = K J_s K^T with J_s = diag(I_s, 0).
struct NoiseModelSpec {
    Eigen::MatrixXd sigma0;
    Eigen::MatrixXd k;
    int s = 0;

    static NoiseModelSpec isotropic(std::size_t q);
};

/// Rank cutoff 1e-10 * lambda_max. Diagonal inputs give a (permuted) diagonal K;
/// other inputs use the scaled eigenvector factorization. Throws ArgumentError
/// for non-PSD or zero input.
NoiseModelSpec reduce_covariance(const Eigen::MatrixXd& sigma0);

/// Basis phi = F phi_A. Without F the basis is the monomial vector itself.
struct FitBasis {
    MultidegreeMatrix monomials;
    std::optional<Eigen::MatrixXd> f;

    FitBasis(MultidegreeMatrix a) : monomials(std::move(a)) {}  // NOLINT(google-explicit-constructor)
    FitBasis(MultidegreeMatrix a, Eigen::MatrixXd f_matrix);

    std::size_t size() const;
};

enum class FitMethod { ols, als_known_sigma, als };
const char* to_string(FitMethod m);

struct FitDiagnostics {
    double smallest_eigenvalue = 0.0;  // of Lambda Psi Lambda at the returned solution
    double gap = 0.0;                  // lambda_2 - lambda_min
    double residual = 0.0;             // ALS only: |lambda_min| / ||Lambda Psi_0 Lambda||_F
    std::optional<PepMethod> solver;
    bool multiplicity_warning = false;
    std::vector<std::string> warnings;
};

struct FitResult {
    Eigen::VectorXd theta;      // unit in the declared norm, largest-magnitude entry positive
    Eigen::VectorXd theta_raw;  // same vector before the sign convention
    std::optional<double> sigma_sq_hat;
    FitMethod method = FitMethod::ols;
    NormKind norm = NormKind::euclidean;
    FitDiagnostics diagnostics;
};

/// Psi(D) = V V^T for the basis (F Psi_A F^T when F is given).
Eigen::MatrixXd ols_matrix(const PointSet& points, const FitBasis& basis);

/// Psi_0 ... Psi_r of Psi(D, sigma) = sum_k sigma^(2k) Psi_k under Sigma = sigma^2 Sigma_0.
/// Psi_0 is always ols_matrix(points, basis); the higher terms go through the
/// reduction d -> K^{-1} d to the J_s case.
std::vector<Eigen::MatrixXd> psi_polynomial(const PointSet& points, const FitBasis& basis,
                                            const NoiseModelSpec& noise);

FitResult fit_ols(const PointSet& points, const FitBasis& basis, const NormWeights& weights);
FitResult fit_als_known_sigma(const PointSet& points, const FitBasis& basis, const NoiseModelSpec& noise,
                              double sigma, const NormWeights& weights);
FitResult fit_als(const PointSet& points, const FitBasis& basis, const NoiseModelSpec& noise,
                  const NormWeights& weights, const PepOptions& options = {});

}  // namespace hyperfit
