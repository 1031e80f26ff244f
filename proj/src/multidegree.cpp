#include "hyperfit/multidegree.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "hyperfit/errors.hpp"

namespace hyperfit {

Multidegree::Multidegree(std::vector<int> entries) : e_(std::move(entries))
{
    for (int v : e_)
        if (v < 0)
            throw ArgumentError("multidegree entries must be nonnegative");
}

Multidegree::Multidegree(std::initializer_list<int> entries)
    : Multidegree(std::vector<int>(entries))
{
}

Multidegree Multidegree::zero(std::size_t q)
{
    return Multidegree(std::vector<int>(q, 0));
}

Multidegree Multidegree::unit(std::size_t q, std::size_t i)
{
    std::vector<int> e(q, 0);
    e.at(i) = 1;
    return Multidegree(std::move(e));
}

int Multidegree::total(std::size_t s) const
{
    if (s < 1 || s > e_.size())
        throw ArgumentError("total degree index s out of range");
    return std::accumulate(e_.begin(), e_.begin() + static_cast<std::ptrdiff_t>(s), 0);
}

bool Multidegree::leq(const Multidegree& other) const
{
    if (dim() != other.dim())
        throw ArgumentError("multidegree dimension mismatch");
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] > other.e_[i])
            return false;
    return true;
}

Multidegree Multidegree::operator+(const Multidegree& other) const
{
    if (dim() != other.dim())
        throw ArgumentError("multidegree dimension mismatch");
    std::vector<int> r(e_);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] += other.e_[i];
    return Multidegree(std::move(r));
}

Multidegree Multidegree::operator-(const Multidegree& other) const
{
    if (!other.leq(*this))
        throw ArgumentError("multidegree subtraction would go negative");
    std::vector<int> r(e_);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= other.e_[i];
    return Multidegree(std::move(r));
}

Multidegree Multidegree::scaled(int factor) const
{
    std::vector<int> r(e_);
    for (int& v : r)
        v *= factor;
    return Multidegree(std::move(r));
}

std::string Multidegree::str() const
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < e_.size(); ++i)
        os << (i ? "," : "") << e_[i];
    os << ']';
    return os.str();
}

int total_degree(const Multidegree& a, int s)
{
    if (s < 1)
        throw ArgumentError("total degree index s out of range");
    return a.total(static_cast<std::size_t>(s));
}

MultidegreeSet::MultidegreeSet(std::size_t q, std::initializer_list<Multidegree> members) : q_(q)
{
    for (const auto& m : members)
        insert(m);
}

void MultidegreeSet::insert(const Multidegree& a)
{
    if (a.dim() != q_)
        throw ArgumentError("multidegree dimension does not match set dimension");
    members_.insert(a);
}

MultidegreeSet MultidegreeSet::united(const MultidegreeSet& other) const
{
    if (other.q_ != q_)
        throw ArgumentError("set dimension mismatch");
    MultidegreeSet r(*this);
    for (const auto& a : other)
        r.insert(a);
    return r;
}

namespace {

// All alpha in Z_+^q with |alpha| == ell, written into `out`.
void enumerate_degree(std::vector<int>& cur, std::size_t pos, int remaining, MultidegreeSet& out)
{
    if (pos + 1 == cur.size()) {
        cur[pos] = remaining;
        out.insert(Multidegree(cur));
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        cur[pos] = v;
        enumerate_degree(cur, pos + 1, remaining - v, out);
    }
}

}  // namespace

MultidegreeSet degree_set(int q, int ell)
{
    if (q < 1 || ell < 0)
        throw ArgumentError("degree_set requires q >= 1 and l >= 0");
    MultidegreeSet out(static_cast<std::size_t>(q));
    std::vector<int> cur(static_cast<std::size_t>(q), 0);
    enumerate_degree(cur, 0, ell, out);
    return out;
}

MultidegreeSet triangular_set(int q, int ell)
{
    if (q < 1 || ell < 0)
        throw ArgumentError("triangular_set requires q >= 1 and l >= 0");
    MultidegreeSet out(static_cast<std::size_t>(q));
    for (int j = 0; j <= ell; ++j)
        out = out.united(degree_set(q, j));
    return out;
}

MultidegreeSet box_set(const Multidegree& gamma)
{
    const std::size_t q = gamma.dim();
    if (q == 0)
        throw ArgumentError("box_set requires a nonempty multidegree");
    MultidegreeSet out(q);
    std::vector<int> cur(q, 0);
    while (true) {
        out.insert(Multidegree(cur));
        std::size_t i = 0;
        while (i < q && cur[i] == gamma[i]) {
            cur[i] = 0;
            ++i;
        }
        if (i == q)
            break;
        ++cur[i];
    }
    return out;
}

MultidegreeSet minkowski_sum(const MultidegreeSet& a, const MultidegreeSet& b)
{
    if (a.dim() != b.dim())
        throw ArgumentError("minkowski_sum: dimension mismatch");
    MultidegreeSet out(a.dim());
    for (const auto& x : a)
        for (const auto& y : b)
            out.insert(x + y);
    return out;
}

bool is_lower_set(const MultidegreeSet& a)
{
    // Closed downward iff closed under removing one unit from any coordinate.
    for (const auto& alpha : a) {
        std::vector<int> e = alpha.entries();
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            --e[i];
            if (!a.contains(Multidegree(e)))
                return false;
            ++e[i];
        }
    }
    return true;
}

MultidegreeMatrix::MultidegreeMatrix(std::vector<Multidegree> columns) : cols_(std::move(columns))
{
    if (cols_.empty())
        throw ArgumentError("multidegree matrix needs at least one column");
    const std::size_t q = cols_.front().dim();
    if (q == 0)
        throw ArgumentError("multidegree matrix columns must have dimension >= 1");
    std::set<Multidegree> seen;
    for (const auto& c : cols_) {
        if (c.dim() != q)
            throw ArgumentError("multidegree matrix columns differ in dimension");
        if (!seen.insert(c).second)
            throw ArgumentError("duplicate multidegree column " + c.str());
    }
}

MultidegreeMatrix MultidegreeMatrix::from_set(const MultidegreeSet& set)
{
    std::vector<Multidegree> cols(set.begin(), set.end());
    std::sort(cols.begin(), cols.end(), [](const Multidegree& x, const Multidegree& y) {
        if (x.total() != y.total())
            return x.total() > y.total();
        return x > y;
    });
    return MultidegreeMatrix(std::move(cols));
}

MultidegreeSet MultidegreeMatrix::as_set() const
{
    MultidegreeSet s(dim());
    for (const auto& c : cols_)
        s.insert(c);
    return s;
}

int MultidegreeMatrix::max_total(int s) const
{
    int r = 0;
    for (const auto& c : cols_)
        r = std::max(r, total_degree(c, s));
    return r;
}

int MultidegreeMatrix::index_of(const Multidegree& alpha) const
{
    auto it = std::find(cols_.begin(), cols_.end(), alpha);
    return it == cols_.end() ? -1 : static_cast<int>(it - cols_.begin());
}

Eigen::VectorXd eval_monomials(const MultidegreeMatrix& a, std::span<const double> d)
{
    if (d.size() != a.dim())
        throw ArgumentError("eval_monomials: point dimension mismatch");
    Eigen::VectorXd out(static_cast<Eigen::Index>(a.size()));
    for (std::size_t k = 0; k < a.size(); ++k) {
        double v = 1.0;
        for (std::size_t j = 0; j < d.size(); ++j)
            for (int p = 0; p < a[k][j]; ++p)
                v *= d[j];
        out[static_cast<Eigen::Index>(k)] = v;
    }
    return out;
}

Eigen::VectorXd eval_monomials(const MultidegreeMatrix& a, const Eigen::VectorXd& d)
{
    return eval_monomials(a, std::span<const double>(d.data(), static_cast<std::size_t>(d.size())));
}

Eigen::MatrixXd vandermonde(const MultidegreeMatrix& a, const PointSet& points)
{
    if (static_cast<std::size_t>(points.cols()) != a.dim())
        throw ArgumentError("vandermonde: point dimension mismatch");
    Eigen::MatrixXd v(static_cast<Eigen::Index>(a.size()), points.rows());
    for (Eigen::Index j = 0; j < points.rows(); ++j) {
        Eigen::VectorXd d = points.row(j).transpose();
        v.col(j) = eval_monomials(a, d);
    }
    return v;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        parts.push_back(cur);
    return parts;
}

int parse_int(const std::string& s, const std::string& spec)
{
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size())
            throw ArgumentError("");
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("malformed basis spec '" + spec + "'");
    }
}

}  // namespace

MultidegreeMatrix parse_basis_shorthand(const std::string& spec)
{
    auto parts = split(spec, ':');
    if (parts.size() == 3 && (parts[0] == "triangular" || parts[0] == "degree")) {
        int q = parse_int(parts[1], spec);
        int l = parse_int(parts[2], spec);
        return MultidegreeMatrix::from_set(parts[0] == "triangular" ? triangular_set(q, l)
                                                                   : degree_set(q, l));
    }
    if (parts.size() == 2 && parts[0] == "box") {
        std::vector<int> g;
        for (const auto& p : split(parts[1], ','))
            g.push_back(parse_int(p, spec));
        if (g.empty())
            throw ArgumentError("malformed basis spec '" + spec + "'");
        return MultidegreeMatrix::from_set(box_set(Multidegree(g)));
    }
    throw ArgumentError("unknown basis spec '" + spec + "'");
}

}  // namespace hyperfit
