#include "hyperfit/moments.hpp"

#include <algorithm>

#include "hyperfit/errors.hpp"

namespace hyperfit {

double hermite_eval(double sigma, int k, double z)
{
    if (k < 0)
        throw ArgumentError("hermite_eval: negative degree");
    if (k == 0)
        return 1.0;
    const double s2 = sigma * sigma;
    double prev = 1.0;
    double cur = z;
    for (int n = 2; n <= k; ++n) {
        double next = z * cur - (n - 1) * s2 * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

HermiteCoefficientTable::HermiteCoefficientTable(int degree_bound) : bound_(degree_bound)
{
    if (degree_bound < 0)
        throw ArgumentError("hermite_table: negative degree bound");
    rows_.resize(static_cast<std::size_t>(degree_bound) + 1);
    for (int k = 0; k <= degree_bound; ++k) {
        auto& row = rows_[static_cast<std::size_t>(k)];
        row.assign(static_cast<std::size_t>(k) + 1, 0);
        if (k == 0) {
            row[0] = 1;
            continue;
        }
        // z * h_{k-1}: H_k[i, k-i] += H_{k-1}[i, k-1-i]
        const auto& r1 = rows_[static_cast<std::size_t>(k - 1)];
        for (int i = 0; i <= k - 1; ++i)
            row[static_cast<std::size_t>(i)] += r1[static_cast<std::size_t>(i)];
        // -(k-1) sigma^2 h_{k-2}: H_k[i, k-i] -= (k-1) H_{k-2}[i-2, k-i]
        if (k >= 2) {
            const auto& r2 = rows_[static_cast<std::size_t>(k - 2)];
            for (int i = 2; i <= k; ++i) {
                std::int64_t term = 0;
                if (__builtin_mul_overflow(static_cast<std::int64_t>(k - 1),
                                           r2[static_cast<std::size_t>(i - 2)], &term) ||
                    __builtin_sub_overflow(row[static_cast<std::size_t>(i)], term,
                                           &row[static_cast<std::size_t>(i)]))
                    throw ArgumentError("hermite_table: degree bound too large for 64-bit coefficients");
            }
        }
    }
}

std::int64_t HermiteCoefficientTable::at(int i, int j) const
{
    if (i < 0 || j < 0 || i + j > bound_)
        throw ArgumentError("hermite coefficient index outside table");
    return rows_[static_cast<std::size_t>(i + j)][static_cast<std::size_t>(i)];
}

HermiteCoefficientTable hermite_table(int degree_bound)
{
    return HermiteCoefficientTable(degree_bound);
}

MomentArray::MomentArray(MultidegreeSet support) : support_(std::move(support))
{
    for (const auto& a : support_)
        values_.emplace(a, 0.0);
}

double MomentArray::at(const Multidegree& alpha) const
{
    auto it = values_.find(alpha);
    if (it == values_.end())
        throw IncompleteSupportError("moment " + alpha.str() + " is outside the array support");
    return it->second;
}

void MomentArray::set(const Multidegree& alpha, double value)
{
    auto it = values_.find(alpha);
    if (it == values_.end())
        throw IncompleteSupportError("moment " + alpha.str() + " is outside the array support");
    it->second = value;
}

MomentArray moment_array(const PointSet& points, const MultidegreeSet& support)
{
    if (points.rows() == 0)
        throw ArgumentError("moment_array: empty dataset");
    const auto q = support.dim();
    if (static_cast<std::size_t>(points.cols()) != q)
        throw ArgumentError("moment_array: point dimension mismatch");

    int max_exp = 0;
    for (const auto& a : support)
        for (std::size_t j = 0; j < q; ++j)
            max_exp = std::max(max_exp, a[j]);

    const std::vector<Multidegree> alphas(support.begin(), support.end());
    std::vector<double> sums(alphas.size(), 0.0);
    // powers(j, p) = d_j^p for the current point
    Eigen::MatrixXd powers(static_cast<Eigen::Index>(q), max_exp + 1);
    for (Eigen::Index n = 0; n < points.rows(); ++n) {
        for (std::size_t j = 0; j < q; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            powers(jj, 0) = 1.0;
            for (int p = 1; p <= max_exp; ++p)
                powers(jj, p) = powers(jj, p - 1) * points(n, jj);
        }
        for (std::size_t k = 0; k < alphas.size(); ++k) {
            double v = 1.0;
            for (std::size_t j = 0; j < q; ++j)
                v *= powers(static_cast<Eigen::Index>(j), alphas[k][j]);
            sums[k] += v;
        }
    }
    MomentArray m(support);
    for (std::size_t k = 0; k < alphas.size(); ++k)
        m.set(alphas[k], sums[k]);
    return m;
}

MomentArray hermite_shift(const MomentArray& c, const Multidegree& nu,
                          const HermiteCoefficientTable& h, const MultidegreeSet& support)
{
    if (nu.dim() != c.dim() || support.dim() != c.dim())
        throw ArgumentError("hermite_shift: dimension mismatch");
    MomentArray b(support);
    for (const auto& alpha : support) {
        if (!nu.leq(alpha))
            continue;
        double coef = 1.0;
        for (std::size_t j = 0; j < alpha.dim() && coef != 0.0; ++j)
            coef *= static_cast<double>(h.at(nu[j], alpha[j] - nu[j]));
        if (coef != 0.0)
            b.set(alpha, coef * c.at(alpha - nu));
    }
    return b;
}

MomentArray hermite_shift(const MomentArray& c, const Multidegree& nu, const HermiteCoefficientTable& h)
{
    return hermite_shift(c, nu, h, c.support());
}

namespace {

void collect_reduced(std::vector<int>& cur, std::size_t pos, std::size_t s, MultidegreeSet& out)
{
    if (pos == s) {
        out.insert(Multidegree(cur));
        return;
    }
    const int orig = cur[pos];
    for (int v = orig; v >= 0; v -= 2) {
        cur[pos] = v;
        collect_reduced(cur, pos + 1, s, out);
    }
    cur[pos] = orig;
}

}  // namespace

MultidegreeSet required_moment_support(const MultidegreeSet& support, int s)
{
    if (s < 1 || static_cast<std::size_t>(s) > support.dim())
        throw ArgumentError("required_moment_support: s out of range");
    MultidegreeSet out(support.dim());
    for (const auto& alpha : support) {
        std::vector<int> cur = alpha.entries();
        collect_reduced(cur, 0, static_cast<std::size_t>(s), out);
    }
    return out;
}

AdjustedMomentBasis adjusted_basis(const MomentArray& m, int s, int r, const MultidegreeSet& support)
{
    const auto q = m.dim();
    if (s < 1 || static_cast<std::size_t>(s) > q)
        throw ArgumentError("adjusted_basis: s out of range");
    if (r < 0)
        throw ArgumentError("adjusted_basis: negative r");
    if (support.dim() != q)
        throw ArgumentError("adjusted_basis: support dimension mismatch");

    int bound = 0;
    for (const auto& a : support)
        bound = std::max(bound, a.total());
    const HermiteCoefficientTable h(bound);

    AdjustedMomentBasis out;
    out.s = s;
    out.support = support;
    out.arrays.reserve(static_cast<std::size_t>(r) + 1);
    for (int k = 0; k <= r; ++k) {
        MomentArray acc(support);
        for (const auto& beta_s : degree_set(s, k)) {
            std::vector<int> nu(q, 0);
            for (int j = 0; j < s; ++j)
                nu[static_cast<std::size_t>(j)] = 2 * beta_s[static_cast<std::size_t>(j)];
            const MomentArray shifted = hermite_shift(m, Multidegree(nu), h, support);
            for (const auto& alpha : support)
                acc.set(alpha, acc.at(alpha) + shifted.at(alpha));
        }
        out.arrays.push_back(std::move(acc));
    }
    return out;
}

double adjusted_moment(const AdjustedMomentBasis& basis, double sigma, const Multidegree& alpha)
{
    if (!basis.support.contains(alpha))
        throw IncompleteSupportError("adjusted moment " + alpha.str() + " is outside the basis support");
    const double s2 = sigma * sigma;
    double power = 1.0;
    double sum = 0.0;
    for (const auto& arr : basis.arrays) {
        sum += power * arr.at(alpha);
        power *= s2;
    }
    return sum;
}

}  // namespace hyperfit
