#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyperfit/errors.hpp"
#include "hyperfit/estimators.hpp"
#include "hyperfit/polynomial.hpp"
#include "hyperfit/quasihankel.hpp"
#include "hyperfit/transforms.hpp"
#include "support.hpp"

using namespace hyperfit;

namespace {

MultidegreeMatrix tri(int q, int l)
{
    return MultidegreeMatrix::from_set(triangular_set(q, l));
}

PointSet noisy_conic(testsupport::Rng& rng, int n, double noise)
{
    PointSet p(n, 2);
    for (int i = 0; i < n; ++i) {
        const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
        p(i, 0) = 2.0 * std::cos(t) - 0.5 + noise * rng.normal();
        p(i, 1) = std::sin(t) + 0.25 * std::cos(t) + 1.0 + noise * rng.normal();
    }
    return p;
}

PointSet one_d(std::initializer_list<double> xs)
{
    PointSet d(static_cast<Eigen::Index>(xs.size()), 1);
    Eigen::Index i = 0;
    for (double x : xs)
        d(i++, 0) = x;
    return d;
}

// sum_k (R_theta^2 * p_{-sigma^2 J_s})(d(k)): every monomial of R^2 deconvolved coordinate-wise.
double deconvolved_objective(const MultidegreeMatrix& a, const Eigen::VectorXd& theta, const PointSet& d,
                             double sigma, int s)
{
    const auto r = Polynomial::from_coefficients(a, theta);
    const auto r2 = r * r;
    double total = 0.0;
    for (Eigen::Index j = 0; j < d.rows(); ++j)
        for (const auto& [alpha, c] : r2.terms()) {
            double prod = c;
            for (std::size_t i = 0; i < alpha.dim(); ++i) {
                const double z = d(j, static_cast<Eigen::Index>(i));
                prod *= static_cast<int>(i) < s ? testsupport::hermite(sigma, alpha[i], z) : std::pow(z, alpha[i]);
            }
            total += prod;
        }
    return total;
}

}  // namespace

TEST_CASE("bombieri weights")
{
    const auto w = bombieri_weights(tri(2, 2));
    CHECK(w.kind == NormKind::bombieri);
    Eigen::VectorXd expected(6);
    expected << 1, 0.5, 1, 1, 1, 1;
    CHECK((w.w - expected).norm() <= 1e-15);
    CHECK(bombieri_weights(MultidegreeMatrix({{0, 0, 0}})).w[0] == 1.0);
    CHECK(bombieri_weights(MultidegreeMatrix({{5, 0}})).w[0] == 1.0);
    CHECK(bombieri_weights(MultidegreeMatrix({{1, 1, 1}})).w[0] == doctest::Approx(1.0 / 6.0));
    CHECK(bombieri_weights(MultidegreeMatrix({{2, 2}})).w[0] == doctest::Approx(4.0 / 24.0));
}

TEST_CASE("norm weight validation")
{
    CHECK(NormWeights::euclidean(3).w == Eigen::VectorXd::Ones(3));
    CHECK_THROWS_AS(NormWeights::custom(Eigen::Vector2d(1.0, 0.0)), ArgumentError);
    CHECK_THROWS_AS(NormWeights::custom(Eigen::VectorXd()), ArgumentError);
    CHECK(NormWeights::custom(Eigen::Vector2d(1.0, 2.0)).kind == NormKind::custom);
}

TEST_CASE("reduce_covariance examples")
{
    const auto id = reduce_covariance(Eigen::MatrixXd::Identity(3, 3));
    CHECK(id.s == 3);
    CHECK(id.k == Eigen::MatrixXd::Identity(3, 3));

    const auto d41 = reduce_covariance(Eigen::Vector2d(4, 1).asDiagonal().toDenseMatrix());
    CHECK(d41.s == 2);
    CHECK(d41.k == Eigen::Vector2d(2, 1).asDiagonal().toDenseMatrix());

    const auto d10 = reduce_covariance(Eigen::Vector2d(1, 0).asDiagonal().toDenseMatrix());
    CHECK(d10.s == 1);
    CHECK(d10.k == Eigen::MatrixXd::Identity(2, 2));

    Eigen::MatrixXd nonpsd(2, 2);
    nonpsd << 1, 2, 2, 1;
    CHECK_THROWS_AS(reduce_covariance(nonpsd), ArgumentError);
    CHECK_THROWS_AS(reduce_covariance(Eigen::MatrixXd::Zero(2, 2)), ArgumentError);
    CHECK_THROWS_AS(reduce_covariance(Eigen::MatrixXd::Ones(2, 3)), ArgumentError);
}

TEST_CASE("reduce_covariance reconstructs random PSD matrices")
{
    testsupport::Rng rng(61);
    for (int t = 0; t < 30; ++t) {
        const int q = rng.integer(1, 4);
        const int rank = rng.integer(1, q);
        const Eigen::MatrixXd b = rng.points(q, rank, -1.0, 1.0);
        const Eigen::MatrixXd sigma0 = b * b.transpose();
        const auto spec = reduce_covariance(sigma0);
        CHECK(spec.s == rank);
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(q, q);
        j.topLeftCorner(spec.s, spec.s).setIdentity();
        CHECK((spec.k * j * spec.k.transpose() - sigma0).norm() <= 1e-10 * sigma0.norm());
        CHECK(std::abs(spec.k.determinant()) > 1e-12);
    }
}

TEST_CASE("fit_ols on five points of the unit circle")
{
    PointSet d(5, 2);
    for (int i = 0; i < 5; ++i) {
        const double t = 0.3 + 1.1 * i;
        d(i, 0) = std::cos(t);
        d(i, 1) = std::sin(t);
    }
    const auto r = fit_ols(d, tri(2, 2), NormWeights::euclidean(6));
    Eigen::VectorXd circle(6);
    circle << 1, 0, 1, 0, 0, -1;
    CHECK(sin_angle(r.theta, circle) <= 1e-8);
    CHECK(r.theta.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.method == FitMethod::ols);
    CHECK_FALSE(r.sigma_sq_hat.has_value());
}

TEST_CASE("fit_ols on a single point is not unique")
{
    PointSet d(1, 2);
    d << 0.5, -1.0;
    const auto r = fit_ols(d, tri(2, 1), NormWeights::euclidean(3));
    CHECK(std::abs(r.theta.dot(eval_monomials(tri(2, 1), Eigen::Vector2d(0.5, -1.0)))) <= 1e-12);
    CHECK(r.diagnostics.multiplicity_warning);
}

TEST_CASE("fit results are unit in the declared norm with the sign convention")
{
    testsupport::Rng rng(62);
    const auto a = tri(2, 2);
    const auto w = bombieri_weights(a);
    const PointSet d = noisy_conic(rng, 30, 0.05);
    for (const auto& r : {fit_ols(d, a, w), fit_als_known_sigma(d, a, NoiseModelSpec::isotropic(2), 0.05, w),
                          fit_als(d, a, NoiseModelSpec::isotropic(2), w)}) {
        CHECK(std::sqrt((w.w.array() * r.theta.array().square()).sum()) == doctest::Approx(1.0).epsilon(1e-12));
        Eigen::Index big = 0;
        r.theta.cwiseAbs().maxCoeff(&big);
        CHECK(r.theta[big] > 0.0);
        CHECK(sin_angle(r.theta, r.theta_raw) == 0.0);
        CHECK(r.norm == NormKind::bombieri);
    }
}

TEST_CASE("fit_als_known_sigma")
{
    testsupport::Rng rng(63);
    const auto a = tri(2, 2);
    const PointSet d = noisy_conic(rng, 25, 0.1);
    const auto w = bombieri_weights(a);
    const auto o = fit_ols(d, a, w);
    const auto z = fit_als_known_sigma(d, a, NoiseModelSpec::isotropic(2), 0.0, w);
    CHECK(o.theta == z.theta);
    CHECK(z.method == FitMethod::als_known_sigma);

    const auto k = fit_als_known_sigma(one_d({1, 3}), tri(1, 1), NoiseModelSpec::isotropic(1), 1.0,
                                       NormWeights::euclidean(2));
    CHECK(sin_angle(k.theta, Eigen::Vector2d(-1, 2)) <= 1e-12);
    CHECK_THROWS_AS(fit_als_known_sigma(d, a, NoiseModelSpec::isotropic(2), -1.0, w), ArgumentError);
}

TEST_CASE("fit_als closed form and noiseless data")
{
    const auto r = fit_als(one_d({1, 3}), tri(1, 1), NoiseModelSpec::isotropic(1), NormWeights::euclidean(2));
    CHECK(*r.sigma_sq_hat == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(-r.theta[1] / r.theta[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(r.diagnostics.solver.has_value());
    CHECK(r.diagnostics.residual <= 1e-9);

    PointSet d(12, 2);
    for (int i = 0; i < 12; ++i) {
        const double t = 0.5 * i;
        d(i, 0) = t;
        d(i, 1) = t * t - 1.0;
    }
    const auto n = fit_als(d, tri(2, 2), NoiseModelSpec::isotropic(2), NormWeights::euclidean(6));
    Eigen::VectorXd parabola(6);
    parabola << 1, 0, 0, 0, -1, -1;
    CHECK(*n.sigma_sq_hat <= 1e-10);
    CHECK(sin_angle(n.theta, parabola) <= 1e-8);
}

TEST_CASE("fit_als finds a solution when some degree is odd")
{
    testsupport::Rng rng(64);
    for (int t = 0; t < 10; ++t) {
        const PointSet d = rng.points(30, 2, -1.0, 1.0);
        CHECK_NOTHROW(fit_als(d, tri(2, 3), NoiseModelSpec::isotropic(2), NormWeights::euclidean(10)));
    }
}

TEST_CASE("fit_als is independent of the norm")
{
    testsupport::Rng rng(65);
    const auto a = tri(2, 3);
    for (int t = 0; t < 8; ++t) {
        const PointSet d = noisy_conic(rng, 40, 0.05);
        const auto b = fit_als(d, a, NoiseModelSpec::isotropic(2), bombieri_weights(a));
        const auto e = fit_als(d, a, NoiseModelSpec::isotropic(2), NormWeights::euclidean(a.size()));
        CHECK(std::abs(*b.sigma_sq_hat - *e.sigma_sq_hat) <= 1e-8 * *e.sigma_sq_hat);
        CHECK(sin_angle(b.theta, e.theta) <= 1e-8);
    }
}

TEST_CASE("general noise shape equals the reduced problem mapped back")
{
    testsupport::Rng rng(66);
    const auto a = tri(2, 2);
    Eigen::MatrixXd sigma0(2, 2);
    sigma0 << 2.0, 0.5, 0.5, 1.0;
    const auto spec = reduce_covariance(sigma0);
    const auto back = induced_map(a, AffineTransform(spec.k, Eigen::Vector2d::Zero())).matrix;
    for (int t = 0; t < 5; ++t) {
        const PointSet d = noisy_conic(rng, 40, 0.05);
        const PointSet y = spec.k.inverse() * d.transpose();
        const PointSet yt = y.transpose();
        const auto direct = fit_als(d, a, spec, NormWeights::euclidean(6));
        const auto reduced = fit_als(yt, a, NoiseModelSpec::isotropic(2), NormWeights::euclidean(6));
        CHECK(sin_angle(direct.theta, back * reduced.theta) <= 1e-8);
        CHECK(*direct.sigma_sq_hat == doctest::Approx(*reduced.sigma_sq_hat).epsilon(1e-8));
    }

    // Rank-deficient shape with known sigma.
    Eigen::MatrixXd rank1(2, 2);
    rank1 << 1.0, 1.0, 1.0, 1.0;
    const auto s1 = reduce_covariance(rank1);
    REQUIRE(s1.s == 1);
    const auto back1 = induced_map(a, AffineTransform(s1.k, Eigen::Vector2d::Zero())).matrix;
    Eigen::MatrixXd j1 = Eigen::MatrixXd::Zero(2, 2);
    j1(0, 0) = 1.0;
    const auto js = reduce_covariance(j1);
    const PointSet d = noisy_conic(rng, 40, 0.05);
    const PointSet yt = (s1.k.inverse() * d.transpose()).transpose();
    // theta = L theta' with L the induced map of K, so Psi'_k = L^T Psi_k L.
    const auto c = psi_polynomial(d, a, s1);
    const auto cr = psi_polynomial(yt, a, js);
    REQUIRE(c.size() == cr.size());
    for (std::size_t k = 0; k < c.size(); ++k)
        CHECK((back1.transpose() * c[k] * back1 - cr[k]).norm() <= 1e-9 * cr[0].norm());
}

TEST_CASE("objective equals the deconvolved residual sum")
{
    testsupport::Rng rng(67);
    for (int t = 0; t < 20; ++t) {
        const int q = rng.integer(1, 3);
        const int s = rng.integer(1, q);
        const auto a = tri(q, rng.integer(1, 2));
        const PointSet d = rng.points(rng.integer(1, 10), q, -1.0, 1.0);
        const double sigma = rng.uniform(0.0, 1.0);
        const Eigen::VectorXd theta = rng.vector(static_cast<int>(a.size()));
        NoiseModelSpec spec = NoiseModelSpec::isotropic(static_cast<std::size_t>(q));
        spec.s = s;
        const auto c = psi_polynomial(d, a, spec);
        const double quad = theta.dot(eval_matrix_polynomial(c, sigma * sigma) * theta);
        const double direct = deconvolved_objective(a, theta, d, sigma, s);
        CHECK(quad == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("custom basis matrices")
{
    testsupport::Rng rng(68);
    const auto a = tri(2, 2);
    Eigen::MatrixXd f = rng.points(6, 6, -1.0, 1.0) + 3.0 * Eigen::MatrixXd::Identity(6, 6);
    const FitBasis fb(a, f);
    CHECK(fb.size() == 6);
    const PointSet d = noisy_conic(rng, 30, 0.05);
    CHECK((ols_matrix(d, fb) - f * psi_matrix(a, d).entries * f.transpose()).norm() <=
          1e-10 * ols_matrix(d, fb).norm());
    const auto viaf = fit_als(d, fb, NoiseModelSpec::isotropic(2), NormWeights::euclidean(6));
    const auto plain = fit_als(d, a, NoiseModelSpec::isotropic(2), NormWeights::euclidean(6));
    CHECK(sin_angle(f.transpose() * viaf.theta, plain.theta) <= 1e-8);

    Eigen::MatrixXd sigma0(2, 2);
    sigma0 << 1.0, 0.3, 0.3, 2.0;
    const auto spec = reduce_covariance(sigma0);
    const auto viaf2 = fit_als(d, fb, spec, NormWeights::euclidean(6));
    const auto plain2 = fit_als(d, a, spec, NormWeights::euclidean(6));
    CHECK(sin_angle(f.transpose() * viaf2.theta, plain2.theta) <= 1e-8);

    CHECK_THROWS_AS(FitBasis(a, Eigen::MatrixXd::Ones(2, 5)), ArgumentError);
}

TEST_CASE("estimator argument errors")
{
    const auto a = tri(2, 2);
    CHECK_THROWS_AS(fit_ols(PointSet(0, 2), a, NormWeights::euclidean(6)), ArgumentError);
    CHECK_THROWS_AS(fit_ols(PointSet::Ones(4, 3), a, NormWeights::euclidean(6)), ArgumentError);
    CHECK_THROWS_AS(fit_ols(PointSet::Ones(4, 2), a, NormWeights::euclidean(5)), ArgumentError);
    CHECK_THROWS_AS(fit_als(PointSet::Ones(4, 2), a, NoiseModelSpec::isotropic(3), NormWeights::euclidean(6)),
                    ArgumentError);
}
