#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperfit/estimators.hpp"
#include "hyperfit/multidegree.hpp"
#include "hyperfit/polynomial.hpp"

namespace hyperfit {

enum class CurveKind { special_data, parabola_conic, eight_curve, hyperplane_union, custom_parametric };
const char* to_string(CurveKind k);
/// Throws ArgumentError on an unknown name.
CurveKind curve_kind_from_string(const std::string& name);

struct CurveSpec {
    CurveKind kind = CurveKind::eight_curve;
    // custom_parametric only: point at parameter t in [0, 1) and, optionally, its implicit equation.
    std::function<Eigen::VectorXd(double)> parametrization;
    std::optional<Polynomial> implicit;
};

std::size_t curve_dimension(const CurveSpec& spec);

/// Exact points on the true variety. `seed` only matters for hyperplane_union.
/// special_data ignores n and returns its 8 fixed points.
PointSet generate_true_points(const CurveSpec& spec, std::size_t n, std::uint64_t seed = 0);

/// Implicit equation of the curve. Throws ArgumentError for special_data and for
/// custom curves without one.
Polynomial true_polynomial(const CurveSpec& spec);

/// Coefficients of true_polynomial in the basis A. Throws ArgumentError when a term is outside A.
Eigen::VectorXd true_theta(const CurveSpec& spec, const MultidegreeMatrix& a);

enum class NoiseKind { gaussian, uniform };
const char* to_string(NoiseKind k);
NoiseKind noise_kind_from_string(const std::string& name);

struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// d + sigma K J_s z with Sigma_0 = K J_s K^T and z standard normal or uniform on
/// [-sqrt 3, sqrt 3]. An empty sigma0 means the identity.
PointSet add_noise(const PointSet& points, const NoiseSpec& noise, const Eigen::MatrixXd& sigma0 = {});

/// Mean of sin^2 between each estimate and theta_true. Throws ArgumentError on zero vectors.
double spread(const std::vector<Eigen::VectorXd>& theta_hats, const Eigen::VectorXd& theta_true);

/// splitmix64 mix of the master seed with a stream path; stable across thread counts.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b, std::uint64_t c = 0);

struct ExperimentConfig {
    CurveSpec curve;
    NoiseKind noise = NoiseKind::gaussian;
    double sigma = 0.01;
    Eigen::MatrixXd sigma0;  // empty = identity
    MultidegreeMatrix basis = MultidegreeMatrix::from_set(triangular_set(2, 4));
    NormKind norm = NormKind::bombieri;
    std::vector<FitMethod> methods{FitMethod::ols, FitMethod::als};
    std::vector<std::size_t> n_list;  // consistency sweep
    std::vector<double> sigma_list;   // sigma sweep
    std::size_t n = 1000;             // sigma sweep
    int realizations = 100;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0 = hardware concurrency
};

enum class SweepAxis { n, sigma };

struct ExperimentRow {
    double x = 0.0;  // N or sigma
    FitMethod method = FitMethod::ols;
    double spread = 0.0;       // relative to sigma on the sigma axis
    double rmse_sigma2 = 0.0;  // relative to sigma^2 on the sigma axis; NaN without sigma_sq_hat
    int realizations = 0;
    int failures = 0;
};

struct ExperimentResult {
    SweepAxis axis = SweepAxis::n;
    std::vector<ExperimentRow> rows;
};

/// One row per (N, method). Fit failures are counted per cell and excluded from the means.
ExperimentResult consistency_sweep(const ExperimentConfig& config);
/// One row per (sigma, method) at N = config.n.
ExperimentResult sigma_sweep(const ExperimentConfig& config);

/// Header `N,method,spread,rmse_sigma2` or `sigma,method,rel_spread,rel_rmse_sigma2`.
std::string to_csv(const ExperimentResult& result);

}  // namespace hyperfit
