#include "hyperfit/quasihankel.hpp"

#include <map>

#include "hyperfit/errors.hpp"

namespace hyperfit {

namespace {

// Fills every (k,l) from one lookup per distinct multidegree sum.
template <typename Lookup>
Eigen::MatrixXd fan_out(const MultidegreeMatrix& a, Lookup&& lookup)
{
    const auto m = static_cast<Eigen::Index>(a.size());
    std::map<Multidegree, double> cache;
    Eigen::MatrixXd h(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index l = k; l < m; ++l) {
            const Multidegree sum = a[static_cast<std::size_t>(k)] + a[static_cast<std::size_t>(l)];
            auto it = cache.find(sum);
            if (it == cache.end())
                it = cache.emplace(sum, lookup(sum)).first;
            h(k, l) = it->second;
            h(l, k) = it->second;
        }
    }
    return h;
}

}  // namespace

QuasiHankelMatrix build(const MultidegreeMatrix& a, const MomentArray& b)
{
    if (a.dim() != b.dim())
        throw ArgumentError("quasi-Hankel build: dimension mismatch");
    return {fan_out(a, [&](const Multidegree& s) { return b.at(s); }), a};
}

QuasiHankelMatrix psi_matrix(const MultidegreeMatrix& a, const PointSet& points)
{
    const auto support = minkowski_sum(a.as_set(), a.as_set());
    return build(a, moment_array(points, support));
}

QuasiHankelMatrix adjusted_psi(const MultidegreeMatrix& a, const AdjustedMomentBasis& basis, double sigma)
{
    if (a.dim() != basis.support.dim())
        throw ArgumentError("adjusted_psi: dimension mismatch");
    return {fan_out(a, [&](const Multidegree& s) { return adjusted_moment(basis, sigma, s); }), a};
}

std::vector<QuasiHankelMatrix> psi_coefficients(const MultidegreeMatrix& a, const AdjustedMomentBasis& basis)
{
    std::vector<QuasiHankelMatrix> out;
    out.reserve(basis.arrays.size());
    for (const auto& arr : basis.arrays)
        out.push_back(build(a, arr));
    return out;
}

AdjustedMomentBasis adjusted_basis_for(const MultidegreeMatrix& a, const PointSet& points, int s)
{
    const auto support = minkowski_sum(a.as_set(), a.as_set());
    const auto raw = moment_array(points, required_moment_support(support, s));
    return adjusted_basis(raw, s, a.max_total(s), support);
}

}  // namespace hyperfit
