#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hyperfit {

// Point sets are stored one point per row (N x q).
using PointSet = Eigen::MatrixXd;

/// Nonnegative integer exponent vector identifying the monomial d^alpha.
class Multidegree {
public:
    Multidegree() = default;
    explicit Multidegree(std::vector<int> entries);
    Multidegree(std::initializer_list<int> entries);

    static Multidegree zero(std::size_t q);
    static Multidegree unit(std::size_t q, std::size_t i);

    std::size_t dim() const { return e_.size(); }
    int operator[](std::size_t i) const { return e_[i]; }
    const std::vector<int>& entries() const { return e_; }

    /// |alpha|_s = alpha_1 + ... + alpha_s (1-based s, 1 <= s <= q).
    int total(std::size_t s) const;
    int total() const { return total(e_.size()); }

    /// Componentwise partial order.
    bool leq(const Multidegree& other) const;

    Multidegree operator+(const Multidegree& other) const;
    /// Componentwise difference; requires other.leq(*this).
    Multidegree operator-(const Multidegree& other) const;
    Multidegree scaled(int factor) const;

    // Lexicographic; used only to key containers.
    auto operator<=>(const Multidegree&) const = default;
    bool operator==(const Multidegree&) const = default;

    std::string str() const;

private:
    std::vector<int> e_;
};

int total_degree(const Multidegree& a, int s);

/// Finite set of multidegrees of a common dimension q.
class MultidegreeSet {
public:
    explicit MultidegreeSet(std::size_t q) : q_(q) {}
    MultidegreeSet(std::size_t q, std::initializer_list<Multidegree> members);

    void insert(const Multidegree& a);
    bool contains(const Multidegree& a) const { return members_.count(a) != 0; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    std::size_t dim() const { return q_; }

    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    MultidegreeSet united(const MultidegreeSet& other) const;
    bool operator==(const MultidegreeSet& other) const
    {
        return q_ == other.q_ && members_ == other.members_;
    }

private:
    std::size_t q_;
    std::set<Multidegree> members_;
};

MultidegreeSet degree_set(int q, int ell);
MultidegreeSet triangular_set(int q, int ell);
MultidegreeSet box_set(const Multidegree& gamma);
MultidegreeSet minkowski_sum(const MultidegreeSet& a, const MultidegreeSet& b);
bool is_lower_set(const MultidegreeSet& a);

/// Ordered list of distinct multidegrees; column k defines phi_k(d) = d^alpha(k).
class MultidegreeMatrix {
public:
    /// Keeps the given order. Throws ArgumentError on duplicates, mixed
    /// dimensions, negative exponents or an empty list.
    explicit MultidegreeMatrix(std::vector<Multidegree> columns);

    /// Canonical order: descending total degree, then descending lexicographic.
    /// For T_{2,2} this gives [2,0] [1,1] [0,2] [1,0] [0,1] [0,0].
    static MultidegreeMatrix from_set(const MultidegreeSet& set);

    std::size_t size() const { return cols_.size(); }
    std::size_t dim() const { return cols_.front().dim(); }
    const Multidegree& operator[](std::size_t k) const { return cols_[k]; }
    const std::vector<Multidegree>& columns() const { return cols_; }

    MultidegreeSet as_set() const;
    int max_total(int s) const;
    /// Index of alpha among the columns, or -1.
    int index_of(const Multidegree& alpha) const;

    bool operator==(const MultidegreeMatrix& other) const { return cols_ == other.cols_; }

private:
    std::vector<Multidegree> cols_;
};

/// Monomial vector phi_A(d); 0^0 = 1.
Eigen::VectorXd eval_monomials(const MultidegreeMatrix& a, std::span<const double> d);
Eigen::VectorXd eval_monomials(const MultidegreeMatrix& a, const Eigen::VectorXd& d);

/// Multivariate Vandermonde matrix: column j is phi_A(d(j)).
Eigen::MatrixXd vandermonde(const MultidegreeMatrix& a, const PointSet& points);

/// Parses "triangular:q:l", "degree:q:l", "box:g1,...,gq".
MultidegreeMatrix parse_basis_shorthand(const std::string& spec);

}  // namespace hyperfit
