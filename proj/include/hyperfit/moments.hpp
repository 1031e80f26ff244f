#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hyperfit/multidegree.hpp"

namespace hyperfit {

/// h_{sigma,k}(z) via h_k = z h_{k-1} - (k-1) sigma^2 h_{k-2}, h_0 = 1, h_1 = z.
double hermite_eval(double sigma, int k, double z);

/// Integer coefficients H[i,j] of h_{sigma,k}(z) = sum_{i+j=k} H[i,j] sigma^i z^j,
/// for all i + j <= degree_bound.
class HermiteCoefficientTable {
public:
    explicit HermiteCoefficientTable(int degree_bound);

    int degree_bound() const { return bound_; }
    std::int64_t at(int i, int j) const;

private:
    int bound_;
    std::vector<std::vector<std::int64_t>> rows_;  // rows_[k][i] = H[i, k-i]
};

HermiteCoefficientTable hermite_table(int degree_bound);

/// Finite slice of an infinite moment array, complete on `support`.
class MomentArray {
public:
    explicit MomentArray(MultidegreeSet support);

    const MultidegreeSet& support() const { return support_; }
    /// Throws IncompleteSupportError naming alpha when alpha is not in the support.
    double at(const Multidegree& alpha) const;
    void set(const Multidegree& alpha, double value);
    std::size_t dim() const { return support_.dim(); }

private:
    MultidegreeSet support_;
    std::map<Multidegree, double> values_;
};

/// M_alpha = sum_j (d(j))^alpha for every alpha in support. Throws on an empty dataset.
MomentArray moment_array(const PointSet& points, const MultidegreeSet& support);

/// Hermite nu-shift restricted to `support`:
///   B_alpha = C_{alpha-nu} prod_j H[nu_j, alpha_j - nu_j]  if alpha >= nu, else 0.
MomentArray hermite_shift(const MomentArray& c, const Multidegree& nu,
                          const HermiteCoefficientTable& h, const MultidegreeSet& support);
MomentArray hermite_shift(const MomentArray& c, const Multidegree& nu, const HermiteCoefficientTable& h);

/// Every alpha - 2 beta (beta supported on the first s coordinates, 2 beta <= alpha)
/// for alpha in `support`: the raw moments the basis arrays read.
MultidegreeSet required_moment_support(const MultidegreeSet& support, int s);

struct AdjustedMomentBasis {
    std::vector<MomentArray> arrays;  // M^(0) ... M^(r)
    int s = 0;
    MultidegreeSet support{1};
};

/// M^(k) = sum over beta in D_{s,k} x {0} of S_{2 beta}(M), for k = 0..r, on `support`.
AdjustedMomentBasis adjusted_basis(const MomentArray& m, int s, int r, const MultidegreeSet& support);

/// sum_k sigma^(2k) M^(k)_alpha.
double adjusted_moment(const AdjustedMomentBasis& basis, double sigma, const Multidegree& alpha);

}  // namespace hyperfit
