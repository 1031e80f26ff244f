#include "hyperfit/transforms.hpp"

#include <cmath>

#include "hyperfit/errors.hpp"
#include "hyperfit/polynomial.hpp"

namespace hyperfit {

AffineTransform::AffineTransform(Eigen::MatrixXd k, Eigen::VectorXd h) : k_(std::move(k)), h_(std::move(h))
{
    const Eigen::Index q = h_.size();
    if (q == 0 || k_.rows() != q || k_.cols() != q)
        throw ArgumentError("affine transform: K must be q x q and h of length q");
    if (!k_.allFinite() || !h_.allFinite())
        throw ArgumentError("affine transform: non-finite entries");
    const double scale = std::pow(k_.norm(), static_cast<double>(q));
    if (!(std::abs(k_.determinant()) > 1e-12 * scale))
        throw ArgumentError("affine transform: K is singular");
}

AffineTransform AffineTransform::identity(std::size_t q)
{
    const auto n = static_cast<Eigen::Index>(q);
    return {Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n)};
}

AffineTransform AffineTransform::translation(const Eigen::VectorXd& h)
{
    return {Eigen::MatrixXd::Identity(h.size(), h.size()), h};
}

AffineTransform AffineTransform::scaling(std::size_t q, double rho)
{
    const auto n = static_cast<Eigen::Index>(q);
    return {rho * Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n)};
}

AffineTransform AffineTransform::rotation2d(double angle)
{
    Eigen::Matrix2d r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return {r, Eigen::Vector2d::Zero()};
}

Eigen::VectorXd AffineTransform::apply(const Eigen::VectorXd& d) const
{
    return k_ * d + h_;
}

PointSet AffineTransform::apply(const PointSet& points) const
{
    if (points.cols() != h_.size())
        throw ArgumentError("affine transform: point dimension mismatch");
    PointSet out = points * k_.transpose();
    out.rowwise() += h_.transpose();
    return out;
}

AffineTransform AffineTransform::inverse() const
{
    const Eigen::MatrixXd ki = k_.inverse();
    return {ki, -ki * h_};
}

AffineTransform AffineTransform::after(const AffineTransform& first) const
{
    return {k_ * first.k_, k_ * first.h_ + h_};
}

const char* to_string(TransformKind k)
{
    switch (k) {
    case TransformKind::orthogonal:
        return "orthogonal";
    case TransformKind::translation:
        return "translation";
    case TransformKind::uniform_scaling:
        return "uniform_scaling";
    case TransformKind::general:
        return "general";
    }
    return "unknown";
}

std::set<TransformKind> classify(const AffineTransform& t, double tol)
{
    const auto q = static_cast<Eigen::Index>(t.dim());
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(q, q);
    const bool no_shift = t.h().cwiseAbs().maxCoeff() <= tol;
    std::set<TransformKind> kinds;
    if (no_shift && (t.k() * t.k().transpose() - eye).cwiseAbs().maxCoeff() <= tol)
        kinds.insert(TransformKind::orthogonal);
    if ((t.k() - eye).cwiseAbs().maxCoeff() <= tol)
        kinds.insert(TransformKind::translation);
    const double rho = t.k().trace() / static_cast<double>(q);
    if (no_shift && (t.k() - rho * eye).cwiseAbs().maxCoeff() <= tol)
        kinds.insert(TransformKind::uniform_scaling);
    if (kinds.empty())
        kinds.insert(TransformKind::general);
    return kinds;
}

InducedCoefficientMap induced_map(const MultidegreeMatrix& a, const AffineTransform& t)
{
    if (a.dim() != t.dim())
        throw ArgumentError("induced_map: basis and transform dimensions differ");
    const AffineTransform inv = t.inverse();
    const auto m = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m, m);

    struct Escape {
        Multidegree alpha;
        double coef;
    };
    std::vector<Escape> escaped;
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto image = Polynomial::monomial(a[static_cast<std::size_t>(k)]).compose_affine(inv.k(), inv.h());
        for (const auto& [beta, c] : image.terms()) {
            const int row = a.index_of(beta);
            if (row < 0)
                escaped.push_back({beta, c});
            else
                l(row, k) = c;
        }
    }
    const double scale = std::max(l.norm(), 1e-300);
    for (const auto& e : escaped)
        if (std::abs(e.coef) > 1e-12 * scale)
            throw ClosureError("transformed basis leaves the monomial set: " + e.alpha.str() +
                               " appears with coefficient " + std::to_string(e.coef));
    return {l};
}

InvarianceReport check_invariance(const FitProcedure& fit, const PointSet& points, const AffineTransform& t,
                                  const MultidegreeMatrix& a, double tol)
{
    const auto map = induced_map(a, t);
    InvarianceReport rep;
    rep.tolerance = tol;
    rep.original = fit(points);
    rep.transformed = fit(t.apply(points));
    rep.mapped = map.matrix * rep.original.theta;
    rep.sin_angle = sin_angle(rep.mapped, rep.transformed.theta);
    rep.pass = rep.sin_angle <= tol;
    rep.multiplicity =
        rep.original.diagnostics.multiplicity_warning || rep.transformed.diagnostics.multiplicity_warning;
    return rep;
}

}  // namespace hyperfit
