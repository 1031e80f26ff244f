#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hyperfit {

struct SymmetricEigenResult {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // orthonormal columns, largest-magnitude entry positive
};

/// Full spectrum of the symmetric part of `s`. Throws NumericalError on non-finite input.
SymmetricEigenResult sym_eig(const Eigen::MatrixXd& s);

/// Flips v so that its largest-magnitude entry (first one on ties) is positive.
Eigen::VectorXd apply_sign_convention(const Eigen::VectorXd& v);

/// Sine of the angle between two nonzero vectors, ignoring sign (theta ~ -theta).
/// Accurate for tiny angles.
double sin_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// sum_k lambda^k C_k
Eigen::MatrixXd eval_matrix_polynomial(std::span<const Eigen::MatrixXd> coeffs, double lambda);

/// lambda_min(sum_k sigma^(2k) Psi_k)
double smallest_eig_min(std::span<const Eigen::MatrixXd> coeffs, double sigma);

enum class PepMethod { linearization, bisection };
const char* to_string(PepMethod m);

struct PepOptions {
    enum class Strategy { automatic, linearization_only, bisection_only };
    Strategy strategy = Strategy::automatic;
    double residual_tol = 1e-9;       // relative to ||Lambda Psi_0 Lambda||_F
    double bisection_width = 1e-12;   // relative to sigma_hi
    double multiplicity_tol = 1e-6;   // lambda_2 threshold relative to ||Lambda Psi_0 Lambda||_F
    int scan_points = 100;
};

struct PepSolution {
    double sigma_sq_hat = 0.0;
    Eigen::VectorXd theta_hat;  // unit in the weighted norm, sign convention applied
    Eigen::VectorXd theta_raw;  // Lambda times the solver's eigenvector, before the convention
    double residual = 0.0;      // |lambda_min(Psi(sigma_hat))| / ||Psi_0||_F (scaled matrices)
    double lambda_min = 0.0;    // smallest eigenvalue at sigma_hat (scaled matrices)
    double lambda2 = 0.0;       // second-smallest eigenvalue at sigma_hat (scaled matrices)
    PepMethod method = PepMethod::linearization;
    bool multiplicity_warning = false;
    std::vector<std::string> warnings;
};

/// Smallest sigma^2 >= 0 at which lambda_min(sum_k sigma^(2k) Psi_k) = 0, with its
/// null direction. `weights` are the w_j of ||theta||_w^2 = sum_j w_j theta_j^2; the
/// eigenproblems are solved on Lambda Psi_k Lambda with Lambda = diag(w^(-1/2)).
/// Throws NoSolutionError when no nonnegative real root is found.
PepSolution solve_pep(std::span<const Eigen::MatrixXd> coeffs, const Eigen::VectorXd& weights,
                      const PepOptions& options = {});

}  // namespace hyperfit
