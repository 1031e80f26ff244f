#include "hyperfit/polynomial.hpp"

#include "hyperfit/errors.hpp"

namespace hyperfit {

Polynomial Polynomial::constant(std::size_t q, double c)
{
    Polynomial p(q);
    p.add_term(Multidegree::zero(q), c);
    return p;
}

Polynomial Polynomial::monomial(const Multidegree& alpha, double c)
{
    Polynomial p(alpha.dim());
    p.add_term(alpha, c);
    return p;
}

Polynomial Polynomial::affine(const Eigen::VectorXd& coeffs, double c0)
{
    const auto q = static_cast<std::size_t>(coeffs.size());
    Polynomial p = constant(q, c0);
    for (std::size_t i = 0; i < q; ++i)
        p.add_term(Multidegree::unit(q, i), coeffs[static_cast<Eigen::Index>(i)]);
    return p;
}

Polynomial Polynomial::from_coefficients(const MultidegreeMatrix& a, const Eigen::VectorXd& theta)
{
    if (static_cast<std::size_t>(theta.size()) != a.size())
        throw ArgumentError("coefficient vector length does not match basis size");
    Polynomial p(a.dim());
    for (std::size_t k = 0; k < a.size(); ++k)
        p.add_term(a[k], theta[static_cast<Eigen::Index>(k)]);
    return p;
}

double Polynomial::coefficient(const Multidegree& alpha) const
{
    auto it = terms_.find(alpha);
    return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Multidegree& alpha, double c)
{
    if (alpha.dim() != q_)
        throw ArgumentError("polynomial term dimension mismatch");
    if (c == 0.0)
        return;
    auto [it, inserted] = terms_.emplace(alpha, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0)
            terms_.erase(it);
    }
}

Polynomial Polynomial::operator+(const Polynomial& other) const
{
    if (other.q_ != q_)
        throw ArgumentError("polynomial dimension mismatch");
    Polynomial r(*this);
    for (const auto& [a, c] : other.terms_)
        r.add_term(a, c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& other) const
{
    if (other.q_ != q_)
        throw ArgumentError("polynomial dimension mismatch");
    Polynomial r(q_);
    for (const auto& [a, c] : terms_)
        for (const auto& [b, e] : other.terms_)
            r.add_term(a + b, c * e);
    return r;
}

Polynomial Polynomial::operator*(double c) const
{
    Polynomial r(q_);
    for (const auto& [a, v] : terms_)
        r.add_term(a, v * c);
    return r;
}

Polynomial Polynomial::pow(int k) const
{
    if (k < 0)
        throw ArgumentError("negative polynomial power");
    Polynomial r = constant(q_, 1.0);
    for (int i = 0; i < k; ++i)
        r = r * *this;
    return r;
}

double Polynomial::evaluate(const Eigen::VectorXd& d) const
{
    if (static_cast<std::size_t>(d.size()) != q_)
        throw ArgumentError("polynomial evaluation: point dimension mismatch");
    double sum = 0.0;
    for (const auto& [a, c] : terms_) {
        double v = c;
        for (std::size_t j = 0; j < q_; ++j)
            for (int p = 0; p < a[j]; ++p)
                v *= d[static_cast<Eigen::Index>(j)];
        sum += v;
    }
    return sum;
}

Polynomial Polynomial::compose_affine(const Eigen::MatrixXd& k, const Eigen::VectorXd& h) const
{
    const auto q = static_cast<Eigen::Index>(q_);
    if (k.rows() != q || k.cols() != q || h.size() != q)
        throw ArgumentError("compose_affine: dimension mismatch");
    // Coordinate i of K y + h as a polynomial in y, and its powers on demand.
    std::vector<std::vector<Polynomial>> powers(q_);
    for (Eigen::Index i = 0; i < q; ++i)
        powers[static_cast<std::size_t>(i)].push_back(constant(q_, 1.0));
    auto power = [&](std::size_t i, int e) -> const Polynomial& {
        auto& cache = powers[i];
        const Polynomial lin =
            affine(k.row(static_cast<Eigen::Index>(i)).transpose(), h[static_cast<Eigen::Index>(i)]);
        while (static_cast<int>(cache.size()) <= e)
            cache.push_back(cache.back() * lin);
        return cache[static_cast<std::size_t>(e)];
    };
    Polynomial r(q_);
    for (const auto& [a, c] : terms_) {
        Polynomial t = constant(q_, c);
        for (std::size_t i = 0; i < q_; ++i)
            if (a[i] > 0)
                t = t * power(i, a[i]);
        r = r + t;
    }
    return r;
}

}  // namespace hyperfit
