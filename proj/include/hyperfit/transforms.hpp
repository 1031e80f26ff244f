#pragma once

#include <functional>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "hyperfit/estimators.hpp"
#include "hyperfit/multidegree.hpp"

namespace hyperfit {

/// T(d) = K d + h with K nonsingular.
class AffineTransform {
public:
    /// Throws ArgumentError when |det K| <= 1e-12 ||K||^q or dimensions disagree.
    AffineTransform(Eigen::MatrixXd k, Eigen::VectorXd h);

    static AffineTransform identity(std::size_t q);
    static AffineTransform translation(const Eigen::VectorXd& h);
    static AffineTransform scaling(std::size_t q, double rho);
    /// Counter-clockwise rotation of the plane.
    static AffineTransform rotation2d(double angle);

    const Eigen::MatrixXd& k() const { return k_; }
    const Eigen::VectorXd& h() const { return h_; }
    std::size_t dim() const { return static_cast<std::size_t>(h_.size()); }

    Eigen::VectorXd apply(const Eigen::VectorXd& d) const;
    PointSet apply(const PointSet& points) const;
    AffineTransform inverse() const;
    /// (this o first)(d) = this(first(d))
    AffineTransform after(const AffineTransform& first) const;

private:
    Eigen::MatrixXd k_;
    Eigen::VectorXd h_;
};

enum class TransformKind { orthogonal, translation, uniform_scaling, general };
const char* to_string(TransformKind k);

std::set<TransformKind> classify(const AffineTransform& t, double tol = 1e-12);

/// Matrix L with R_theta(d) = R_{L theta}(T(d)) as polynomials.
struct InducedCoefficientMap {
    Eigen::MatrixXd matrix;
};

/// Expands every phi_k o T^{-1} in the basis. Throws ClosureError naming the first
/// monomial outside the basis whose coefficient exceeds 1e-12 ||L||.
InducedCoefficientMap induced_map(const MultidegreeMatrix& a, const AffineTransform& t);

using FitProcedure = std::function<FitResult(const PointSet&)>;

struct InvarianceReport {
    double sin_angle = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    FitResult original;     // fit on D
    FitResult transformed;  // fit on T(D)
    Eigen::VectorXd mapped; // L theta(D)
    bool multiplicity = false;
};

/// Fits D and T(D), maps the first estimate through the induced map and compares
/// directions with the second.
InvarianceReport check_invariance(const FitProcedure& fit, const PointSet& points, const AffineTransform& t,
                                  const MultidegreeMatrix& a, double tol);

}  // namespace hyperfit
