#include "hyperfit/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hyperfit/errors.hpp"
#include "hyperfit/polynomial.hpp"
#include "hyperfit/quasihankel.hpp"

namespace hyperfit {

const char* to_string(NormKind k)
{
    switch (k) {
    case NormKind::euclidean:
        return "euclidean";
    case NormKind::bombieri:
        return "bombieri";
    case NormKind::custom:
        return "custom";
    }
    return "unknown";
}

const char* to_string(FitMethod m)
{
    switch (m) {
    case FitMethod::ols:
        return "ols";
    case FitMethod::als_known_sigma:
        return "als-sigma";
    case FitMethod::als:
        return "als";
    }
    return "unknown";
}

NormWeights NormWeights::euclidean(std::size_t m)
{
    return {Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m)), NormKind::euclidean};
}

NormWeights NormWeights::custom(Eigen::VectorXd w)
{
    if (w.size() == 0 || (w.array() <= 0.0).any() || !w.allFinite())
        throw ArgumentError("norm weights must be finite and positive");
    return {std::move(w), NormKind::custom};
}

NormWeights bombieri_weights(const MultidegreeMatrix& a)
{
    Eigen::VectorXd w(static_cast<Eigen::Index>(a.size()));
    for (std::size_t k = 0; k < a.size(); ++k) {
        // prod(alpha_i!) / |alpha|! as a product of ratios to stay in range
        double v = 1.0;
        int n = 0;
        for (std::size_t i = 0; i < a.dim(); ++i)
            for (int j = 1; j <= a[k][i]; ++j)
                v *= static_cast<double>(j) / static_cast<double>(++n);
        w[static_cast<Eigen::Index>(k)] = v;
    }
    return {w, NormKind::bombieri};
}

NoiseModelSpec NoiseModelSpec::isotropic(std::size_t q)
{
    const auto n = static_cast<Eigen::Index>(q);
    return {Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Identity(n, n), static_cast<int>(q)};
}

NoiseModelSpec reduce_covariance(const Eigen::MatrixXd& sigma0)
{
    const Eigen::Index q = sigma0.rows();
    if (q == 0 || sigma0.cols() != q)
        throw ArgumentError("Sigma_0 must be a nonempty square matrix");
    if (!sigma0.allFinite())
        throw ArgumentError("Sigma_0 has non-finite entries");
    const Eigen::MatrixXd sym = 0.5 * (sigma0 + sigma0.transpose());
    const auto e = sym_eig(sym);
    const double lmax = e.eigenvalues.cwiseAbs().maxCoeff();
    if (lmax == 0.0)
        throw ArgumentError("Sigma_0 is zero");
    if (e.eigenvalues[0] < -1e-10 * lmax)
        throw ArgumentError("Sigma_0 is not positive semidefinite");
    const double cutoff = 1e-10 * lmax;

    NoiseModelSpec spec;
    spec.sigma0 = sym;
    spec.k = Eigen::MatrixXd::Zero(q, q);

    const bool diagonal = (sym - Eigen::MatrixXd(sym.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
    if (diagonal) {
        std::vector<Eigen::Index> order(static_cast<std::size_t>(q));
        std::iota(order.begin(), order.end(), 0);
        std::stable_partition(order.begin(), order.end(),
                              [&](Eigen::Index i) { return sym(i, i) > cutoff; });
        for (Eigen::Index p = 0; p < q; ++p) {
            const Eigen::Index i = order[static_cast<std::size_t>(p)];
            const double d = sym(i, i);
            if (d > cutoff) {
                spec.k(i, p) = std::sqrt(d);
                ++spec.s;
            } else {
                spec.k(i, p) = 1.0;
            }
        }
        return spec;
    }
    // Descending eigenvalues; null directions keep unit scale.
    for (Eigen::Index p = 0; p < q; ++p) {
        const Eigen::Index i = q - 1 - p;
        const double lam = e.eigenvalues[i];
        if (lam > cutoff) {
            spec.k.col(p) = std::sqrt(lam) * e.eigenvectors.col(i);
            ++spec.s;
        } else {
            spec.k.col(p) = e.eigenvectors.col(i);
        }
    }
    return spec;
}

FitBasis::FitBasis(MultidegreeMatrix a, Eigen::MatrixXd f_matrix) : monomials(std::move(a)), f(std::move(f_matrix))
{
    if (f->cols() != static_cast<Eigen::Index>(monomials.size()) || f->rows() == 0)
        throw ArgumentError("basis matrix F must have one column per monomial");
}

std::size_t FitBasis::size() const
{
    return f ? static_cast<std::size_t>(f->rows()) : monomials.size();
}

namespace {

void check_points(const PointSet& points, const FitBasis& basis)
{
    if (points.rows() == 0)
        throw ArgumentError("dataset is empty");
    if (static_cast<std::size_t>(points.cols()) != basis.monomials.dim())
        throw ArgumentError("dataset dimension does not match the basis");
    if (!points.allFinite())
        throw ArgumentError("dataset has non-finite coordinates");
}

void check_weights(const NormWeights& weights, const FitBasis& basis)
{
    if (static_cast<std::size_t>(weights.w.size()) != basis.size())
        throw ArgumentError("norm weight vector length does not match the basis size");
    if ((weights.w.array() <= 0.0).any())
        throw ArgumentError("norm weights must be positive");
}

// phi_A(K y) = G phi_{A'}(y)
struct TransformedBasis {
    MultidegreeMatrix monomials;
    Eigen::MatrixXd g;
};

TransformedBasis transform_basis(const MultidegreeMatrix& a, const Eigen::MatrixXd& k)
{
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(k.rows());
    std::vector<Polynomial> images;
    MultidegreeSet produced(a.dim());
    for (const auto& alpha : a.columns()) {
        images.push_back(Polynomial::monomial(alpha).compose_affine(k, zero));
        for (const auto& [beta, c] : images.back().terms())
            produced.insert(beta);
    }
    auto a2 = MultidegreeMatrix::from_set(produced);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.size()),
                                              static_cast<Eigen::Index>(a2.size()));
    for (std::size_t i = 0; i < images.size(); ++i)
        for (const auto& [beta, c] : images[i].terms())
            g(static_cast<Eigen::Index>(i), a2.index_of(beta)) = c;
    return {std::move(a2), std::move(g)};
}

Eigen::MatrixXd sandwich(const std::optional<Eigen::MatrixXd>& f, const Eigen::MatrixXd& m)
{
    return f ? Eigen::MatrixXd(*f * m * f->transpose()) : m;
}

struct MinEig {
    Eigen::VectorXd theta;
    Eigen::VectorXd theta_raw;
    double lambda_min;
    double lambda2;
    bool multiplicity;
};

// theta = Lambda theta', theta' the minimal eigenvector of Lambda Psi Lambda.
MinEig minimal_direction(const Eigen::MatrixXd& psi, const NormWeights& weights)
{
    const Eigen::VectorXd lam = weights.w.array().rsqrt().matrix();
    const Eigen::MatrixXd scaled = lam.asDiagonal() * psi * lam.asDiagonal();
    const auto e = sym_eig(scaled);
    MinEig r;
    r.theta_raw = lam.asDiagonal() * e.eigenvectors.col(0);
    r.theta_raw /= std::sqrt((weights.w.array() * r.theta_raw.array().square()).sum());
    r.theta = apply_sign_convention(r.theta_raw);
    r.lambda_min = e.eigenvalues[0];
    r.lambda2 = e.eigenvalues.size() > 1 ? e.eigenvalues[1] : std::numeric_limits<double>::infinity();
    r.multiplicity = e.eigenvalues.size() > 1 && r.lambda2 < 1e-6 * scaled.norm();
    return r;
}

FitResult eigen_fit(const Eigen::MatrixXd& psi, const NormWeights& weights, FitMethod method)
{
    const auto me = minimal_direction(psi, weights);
    FitResult r;
    r.theta = me.theta;
    r.theta_raw = me.theta_raw;
    r.method = method;
    r.norm = weights.kind;
    r.diagnostics.smallest_eigenvalue = me.lambda_min;
    r.diagnostics.gap = me.lambda2 - me.lambda_min;
    r.diagnostics.multiplicity_warning = me.multiplicity;
    if (me.multiplicity)
        r.diagnostics.warnings.push_back("second-smallest eigenvalue is near zero; the fitted hypersurface is not unique");
    return r;
}

}  // namespace

Eigen::MatrixXd ols_matrix(const PointSet& points, const FitBasis& basis)
{
    check_points(points, basis);
    return sandwich(basis.f, psi_matrix(basis.monomials, points).entries);
}

std::vector<Eigen::MatrixXd> psi_polynomial(const PointSet& points, const FitBasis& basis,
                                            const NoiseModelSpec& noise)
{
    check_points(points, basis);
    const auto q = static_cast<Eigen::Index>(basis.monomials.dim());
    if (noise.k.rows() != q || noise.k.cols() != q)
        throw ArgumentError("noise model dimension does not match the data");
    if (noise.s < 1 || noise.s > q)
        throw ArgumentError("noise model rank must be between 1 and q");

    std::vector<Eigen::MatrixXd> out;
    out.push_back(ols_matrix(points, basis));

    const bool identity = noise.k == Eigen::MatrixXd::Identity(q, q);
    MultidegreeMatrix work = basis.monomials;
    std::optional<Eigen::MatrixXd> f = basis.f;
    PointSet y = points;
    if (!identity) {
        auto tb = transform_basis(basis.monomials, noise.k);
        work = std::move(tb.monomials);
        f = basis.f ? Eigen::MatrixXd(*basis.f * tb.g) : tb.g;
        // y = K^{-1} d, row-wise
        y = noise.k.lu().solve(points.transpose()).transpose();
    }
    const auto mb = adjusted_basis_for(work, y, noise.s);
    const auto mats = psi_coefficients(work, mb);
    for (std::size_t k = 1; k < mats.size(); ++k)
        out.push_back(sandwich(f, mats[k].entries));
    return out;
}

FitResult fit_ols(const PointSet& points, const FitBasis& basis, const NormWeights& weights)
{
    check_weights(weights, basis);
    return eigen_fit(ols_matrix(points, basis), weights, FitMethod::ols);
}

FitResult fit_als_known_sigma(const PointSet& points, const FitBasis& basis, const NoiseModelSpec& noise,
                              double sigma, const NormWeights& weights)
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw ArgumentError("sigma must be finite and nonnegative");
    check_weights(weights, basis);
    const auto coeffs = psi_polynomial(points, basis, noise);
    return eigen_fit(eval_matrix_polynomial(coeffs, sigma * sigma), weights, FitMethod::als_known_sigma);
}

FitResult fit_als(const PointSet& points, const FitBasis& basis, const NoiseModelSpec& noise,
                  const NormWeights& weights, const PepOptions& options)
{
    check_weights(weights, basis);
    const auto coeffs = psi_polynomial(points, basis, noise);
    const auto sol = solve_pep(coeffs, weights.w, options);

    FitResult r;
    r.theta = sol.theta_hat;
    r.theta_raw = sol.theta_raw;
    r.sigma_sq_hat = sol.sigma_sq_hat;
    r.method = FitMethod::als;
    r.norm = weights.kind;
    r.diagnostics.residual = sol.residual;
    r.diagnostics.solver = sol.method;
    r.diagnostics.multiplicity_warning = sol.multiplicity_warning;
    r.diagnostics.warnings = sol.warnings;
    r.diagnostics.smallest_eigenvalue = sol.lambda_min;
    r.diagnostics.gap = sol.lambda2 - sol.lambda_min;
    return r;
}

}  // namespace hyperfit
