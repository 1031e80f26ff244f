#include "hyperfit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>

#include <Eigen/Eigenvalues>

#include "hyperfit/errors.hpp"

namespace hyperfit {

Eigen::VectorXd apply_sign_convention(const Eigen::VectorXd& v)
{
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best]))
            best = i;
    return (v.size() > 0 && v[best] < 0) ? Eigen::VectorXd(-v) : v;
}

SymmetricEigenResult sym_eig(const Eigen::MatrixXd& s)
{
    if (s.rows() != s.cols())
        throw ArgumentError("sym_eig: matrix is not square");
    if (!s.allFinite())
        throw NumericalError("sym_eig: non-finite matrix entries");
    const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success)
        throw NumericalError("sym_eig: eigen-decomposition did not converge");
    SymmetricEigenResult r{es.eigenvalues(), es.eigenvectors()};
    for (Eigen::Index j = 0; j < r.eigenvectors.cols(); ++j)
        r.eigenvectors.col(j) = apply_sign_convention(r.eigenvectors.col(j));
    return r;
}

double sin_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    if (a.size() != b.size())
        throw ArgumentError("sin_angle: length mismatch");
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0)
        throw ArgumentError("sin_angle: zero vector");
    const Eigen::VectorXd u = a / na;
    Eigen::VectorXd v = b / nb;
    if (u.dot(v) < 0.0)
        v = -v;
    // |u - v| |u + v| / 2 = 2 sin(t/2) cos(t/2)
    return std::min(1.0, 0.5 * (u - v).norm() * (u + v).norm());
}

Eigen::MatrixXd eval_matrix_polynomial(std::span<const Eigen::MatrixXd> coeffs, double lambda)
{
    if (coeffs.empty())
        throw ArgumentError("matrix polynomial has no coefficients");
    Eigen::MatrixXd p = coeffs[0];
    double power = 1.0;
    for (std::size_t k = 1; k < coeffs.size(); ++k) {
        power *= lambda;
        p += power * coeffs[k];
    }
    return p;
}

double smallest_eig_min(std::span<const Eigen::MatrixXd> coeffs, double sigma)
{
    return sym_eig(eval_matrix_polynomial(coeffs, sigma * sigma)).eigenvalues[0];
}

const char* to_string(PepMethod m)
{
    return m == PepMethod::linearization ? "linearization" : "bisection";
}

namespace {

double lambda_min_at(std::span<const Eigen::MatrixXd> c, double lambda)
{
    return sym_eig(eval_matrix_polynomial(c, lambda)).eigenvalues[0];
}

Eigen::MatrixXd derivative_at(std::span<const Eigen::MatrixXd> c, double lambda)
{
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(c[0].rows(), c[0].cols());
    double power = 1.0;
    for (std::size_t k = 1; k < c.size(); ++k) {
        d += static_cast<double>(k) * power * c[k];
        power *= lambda;
    }
    return d;
}

// Newton on g(lambda) = lambda_min(P(lambda)) with g' = v^T P'(lambda) v.
// Steps are kept only while |g| decreases.
double polish_root(std::span<const Eigen::MatrixXd> c, double lambda, double floor_tol)
{
    auto e = sym_eig(eval_matrix_polynomial(c, lambda));
    double g = e.eigenvalues[0];
    for (int it = 0; it < 12 && std::abs(g) > floor_tol; ++it) {
        const Eigen::VectorXd v = e.eigenvectors.col(0);
        const double dg = v.dot(derivative_at(c, lambda) * v);
        if (dg == 0.0 || !std::isfinite(dg))
            break;
        const double next = std::max(0.0, lambda - g / dg);
        auto en = sym_eig(eval_matrix_polynomial(c, next));
        if (std::abs(en.eigenvalues[0]) >= std::abs(g))
            break;
        lambda = next;
        e = std::move(en);
        g = e.eigenvalues[0];
    }
    return lambda;
}

// Positivity check: lambda_min >= -tol on a sigma grid below the root.
bool positive_below(std::span<const Eigen::MatrixXd> c, double lambda, double tol, int points)
{
    const double sigma_hat = std::sqrt(lambda);
    for (int i = 0; i < points; ++i) {
        const double sigma = sigma_hat * static_cast<double>(i) / points;
        if (lambda_min_at(c, sigma * sigma) < -tol)
            return false;
    }
    return true;
}

// Real nonnegative finite eigenvalues of the first companion pencil, ascending.
std::vector<double> linearization_candidates(std::span<const Eigen::MatrixXd> c)
{
    const Eigen::Index m = c[0].rows();
    const auto r = static_cast<Eigen::Index>(c.size()) - 1;
    const Eigen::Index n = m * r;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i + 1 < r; ++i)
        a.block(i * m, (i + 1) * m, m, m).setIdentity();
    for (Eigen::Index k = 0; k < r; ++k)
        a.block((r - 1) * m, k * m, m, m) = -c[static_cast<std::size_t>(k)];
    b.block((r - 1) * m, (r - 1) * m, m, m) = c[static_cast<std::size_t>(r)];

    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(a, b, false);
    if (ges.info() != Eigen::Success)
        return {};
    const Eigen::VectorXcd alphas = ges.alphas();
    const Eigen::VectorXd betas = ges.betas();

    std::vector<double> out;
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::complex<double> al = alphas[i];
        const double be = betas[i];
        if (std::abs(be) <= 1e-13 * std::abs(al) || be == 0.0)
            continue;  // infinite
        const std::complex<double> mu = al / be;
        if (!std::isfinite(mu.real()))
            continue;
        if (std::abs(mu.imag()) > 1e-6 * std::max(std::abs(mu), 1e-12))
            continue;
        if (mu.real() < -1e-8)
            continue;
        out.push_back(std::max(0.0, mu.real()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<double> solve_by_linearization(std::span<const Eigen::MatrixXd> c, double gamma, double tol,
                                             const PepOptions& opt, bool& scan_failed)
{
    // Balance the pencil with lambda = gamma * mu.
    std::vector<Eigen::MatrixXd> scaled;
    scaled.reserve(c.size());
    double power = 1.0;
    for (const auto& ck : c) {
        scaled.push_back(power * ck);
        power *= gamma;
    }
    for (double mu : linearization_candidates(scaled)) {
        const double lambda = polish_root(c, gamma * mu, 1e-7 * tol);
        if (std::abs(lambda_min_at(c, lambda)) > tol)
            continue;
        if (!positive_below(c, lambda, tol, opt.scan_points)) {
            scan_failed = true;
            return std::nullopt;
        }
        return lambda;
    }
    return std::nullopt;
}

std::optional<double> solve_by_bisection(std::span<const Eigen::MatrixXd> c, double gamma, double tol,
                                         const PepOptions& opt)
{
    auto g = [&](double sigma) { return lambda_min_at(c, sigma * sigma); };
    double lo = 0.0;
    double hi = std::sqrt(gamma);
    int grow = 0;
    while (g(hi) >= 0.0) {
        if (++grow > 200 || !std::isfinite(hi))
            return std::nullopt;
        lo = hi;
        hi *= 2.0;
    }
    const double width = opt.bisection_width * hi;
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return polish_root(c, hi * hi, 1e-7 * tol);
}

double frobenius(const Eigen::MatrixXd& m)
{
    return m.norm();
}

}  // namespace

PepSolution solve_pep(std::span<const Eigen::MatrixXd> coeffs, const Eigen::VectorXd& weights,
                      const PepOptions& opt)
{
    if (coeffs.empty())
        throw ArgumentError("solve_pep: no coefficient matrices");
    const Eigen::Index m = coeffs[0].rows();
    if (weights.size() != m)
        throw ArgumentError("solve_pep: weight vector length does not match matrix size");
    if ((weights.array() <= 0.0).any())
        throw ArgumentError("solve_pep: weights must be positive");
    for (const auto& c : coeffs)
        if (c.rows() != m || c.cols() != m)
            throw ArgumentError("solve_pep: inconsistent coefficient dimensions");

    const Eigen::VectorXd lam = weights.array().rsqrt().matrix();
    std::vector<Eigen::MatrixXd> c;
    c.reserve(coeffs.size());
    for (const auto& ck : coeffs)
        c.push_back(lam.asDiagonal() * ck * lam.asDiagonal());

    const double norm0 = frobenius(c[0]);
    if (norm0 == 0.0 || !std::isfinite(norm0))
        throw NumericalError("solve_pep: Psi_0 is zero or non-finite");
    const double tol = opt.residual_tol * norm0;

    PepSolution sol;
    std::optional<double> lambda;
    const bool allow_lin = opt.strategy != PepOptions::Strategy::bisection_only;
    const bool allow_bis = opt.strategy != PepOptions::Strategy::linearization_only;

    if (lambda_min_at(c, 0.0) <= tol) {
        lambda = 0.0;  // Psi_0 already singular: lambda = 0 is an eigenvalue of the pencil
        sol.method = allow_lin ? PepMethod::linearization : PepMethod::bisection;
    } else {
        // Highest nonzero coefficient fixes the scale of lambda.
        std::size_t top = 0;
        for (std::size_t k = 1; k < c.size(); ++k)
            if (frobenius(c[k]) > 0.0)
                top = k;
        if (top == 0)
            throw NoSolutionError("no sigma-dependent terms and Psi_0 is nonsingular: no root exists");
        const double gamma = std::pow(norm0 / frobenius(c[top]), 1.0 / static_cast<double>(top));
        std::span<const Eigen::MatrixXd> trimmed(c.data(), top + 1);

        bool scan_failed = false;
        if (allow_lin) {
            lambda = solve_by_linearization(trimmed, gamma, tol, opt, scan_failed);
            sol.method = PepMethod::linearization;
            if (scan_failed)
                sol.warnings.push_back("linearization root failed the positivity scan; used bisection");
        }
        if (!lambda && allow_bis) {
            lambda = solve_by_bisection(trimmed, gamma, tol, opt);
            sol.method = PepMethod::bisection;
            if (lambda && !positive_below(trimmed, *lambda, tol, opt.scan_points))
                sol.warnings.push_back("lambda_min is negative below the reported root; root is not the first crossing");
        }
        if (!lambda)
            throw NoSolutionError(
                "no nonnegative real sigma with lambda_min(Psi(sigma)) = 0 was found; existence is "
                "guaranteed when Sigma_0 is positive definite with a lower-set basis, or when some "
                "basis multidegree has odd degree in the noisy coordinates");
    }

    const auto e = sym_eig(eval_matrix_polynomial(c, *lambda));
    sol.sigma_sq_hat = *lambda;
    sol.lambda_min = e.eigenvalues[0];
    sol.residual = std::abs(e.eigenvalues[0]) / norm0;
    sol.lambda2 = m > 1 ? e.eigenvalues[1] : std::numeric_limits<double>::infinity();
    if (m > 1 && sol.lambda2 < opt.multiplicity_tol * norm0) {
        sol.multiplicity_warning = true;
        sol.warnings.push_back("second-smallest eigenvalue is near zero; the fitted hypersurface is not unique");
    }
    Eigen::VectorXd theta = lam.asDiagonal() * e.eigenvectors.col(0);
    const double wn = std::sqrt((weights.array() * theta.array().square()).sum());
    sol.theta_raw = theta / wn;
    sol.theta_hat = apply_sign_convention(sol.theta_raw);
    return sol;
}

}  // namespace hyperfit
