#pragma once

#include <map>

#include <Eigen/Dense>

#include "hyperfit/multidegree.hpp"

namespace hyperfit {

/// Sparse real polynomial in q variables, keyed by multidegree.
class Polynomial {
public:
    explicit Polynomial(std::size_t q) : q_(q) {}

    static Polynomial constant(std::size_t q, double c);
    static Polynomial monomial(const Multidegree& alpha, double c = 1.0);
    /// coeffs . d + c0
    static Polynomial affine(const Eigen::VectorXd& coeffs, double c0);
    /// theta^T phi_A(d)
    static Polynomial from_coefficients(const MultidegreeMatrix& a, const Eigen::VectorXd& theta);

    std::size_t dim() const { return q_; }
    const std::map<Multidegree, double>& terms() const { return terms_; }
    double coefficient(const Multidegree& alpha) const;

    void add_term(const Multidegree& alpha, double c);
    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator*(double c) const;
    Polynomial pow(int k) const;

    double evaluate(const Eigen::VectorXd& d) const;

    /// The polynomial y -> p(K y + h).
    Polynomial compose_affine(const Eigen::MatrixXd& k, const Eigen::VectorXd& h) const;

private:
    std::size_t q_;
    std::map<Multidegree, double> terms_;
};

}  // namespace hyperfit
