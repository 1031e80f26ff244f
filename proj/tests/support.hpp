#pragma once

// Test-side generators and oracles. Nothing here calls into the moment or
// quasi-Hankel code, so the oracles stay independent of the paths they check.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hyperfit/multidegree.hpp"

namespace testsupport {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }

    Eigen::MatrixXd points(int n, int q, double lo, double hi)
    {
        Eigen::MatrixXd p(n, q);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < q; ++j)
                p(i, j) = uniform(lo, hi);
        return p;
    }

    Eigen::VectorXd vector(int m)
    {
        Eigen::VectorXd v(m);
        for (int i = 0; i < m; ++i)
            v[i] = normal();
        return v;
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

// h_{sigma,k}(z) by the three-term recurrence.
inline double hermite(double sigma, int k, double z)
{
    double prev = 1.0;
    if (k == 0)
        return prev;
    double cur = z;
    for (int j = 2; j <= k; ++j) {
        const double next = z * cur - (j - 1) * sigma * sigma * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// Psi(D, sigma)_{kl} = sum_j prod_{i <= s} h_{sigma, alpha_i}(d_ji) prod_{i > s} d_ji^alpha_i
// with alpha = alpha(k) + alpha(l). `scale` receives the same sum of absolute products.
inline Eigen::MatrixXd direct_adjusted_psi(const hyperfit::MultidegreeMatrix& a, const Eigen::MatrixXd& d,
                                           double sigma, int s, Eigen::MatrixXd* scale = nullptr)
{
    const auto m = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
    if (scale)
        *scale = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k)
        for (Eigen::Index l = 0; l < m; ++l) {
            const auto alpha = a[static_cast<std::size_t>(k)] + a[static_cast<std::size_t>(l)];
            for (Eigen::Index j = 0; j < d.rows(); ++j) {
                double prod = 1.0;
                for (std::size_t i = 0; i < alpha.dim(); ++i) {
                    const double z = d(j, static_cast<Eigen::Index>(i));
                    prod *= static_cast<int>(i) < s ? hermite(sigma, alpha[i], z) : std::pow(z, alpha[i]);
                }
                out(k, l) += prod;
                if (scale)
                    (*scale)(k, l) += std::abs(prod);
            }
        }
    return out;
}

// V V^T from an explicitly formed Vandermonde matrix.
inline Eigen::MatrixXd dense_gram(const hyperfit::MultidegreeMatrix& a, const Eigen::MatrixXd& d)
{
    Eigen::MatrixXd v(static_cast<Eigen::Index>(a.size()), d.rows());
    for (std::size_t k = 0; k < a.size(); ++k)
        for (Eigen::Index j = 0; j < d.rows(); ++j) {
            double prod = 1.0;
            for (std::size_t i = 0; i < a.dim(); ++i)
                for (int e = 0; e < a[k][i]; ++e)
                    prod *= d(j, static_cast<Eigen::Index>(i));
            v(static_cast<Eigen::Index>(k), j) = prod;
        }
    return v * v.transpose();
}

inline double sin_between(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    const Eigen::VectorXd u = a.normalized();
    Eigen::VectorXd v = b.normalized();
    if (u.dot(v) < 0)
        v = -v;
    return (u - v).norm() * (u + v).norm() / 2.0;
}

}  // namespace testsupport
