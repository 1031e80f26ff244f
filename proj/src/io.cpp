#include "hyperfit/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "hyperfit/errors.hpp"

namespace hyperfit {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, std::size_t line)
{
    const std::string t = trim(field);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t[0] == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw FormatError("line " + std::to_string(line) + ": cannot parse number '" + t + "'");
    return v;
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json vector_json(const Eigen::VectorXd& v)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v[i]);
    return a;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const char* what)
{
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw FormatError(std::string(what) + " must be a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw FormatError(std::string(what) + " has ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (!row[static_cast<std::size_t>(c)].is_number())
                throw FormatError(std::string(what) + " entries must be numbers");
            m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
        }
    }
    return m;
}

FitBasis basis_from_json(const Json& j)
{
    if (j.is_array())
        return FitBasis(multidegree_matrix_from_json(j));
    if (j.is_object() && j.contains("monomials")) {
        auto a = multidegree_matrix_from_json(j.at("monomials"));
        if (j.contains("F"))
            return FitBasis(std::move(a), matrix_from_json(j.at("F"), "F"));
        return FitBasis(std::move(a));
    }
    throw FormatError("basis JSON must be an array of multidegrees or an object with \"monomials\"");
}

}  // namespace

PointSet read_points_csv(std::istream& in)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            row.push_back(parse_double(field, lineno));
        if (!line.empty() && trim(line).back() == ',')
            throw FormatError("line " + std::to_string(lineno) + ": trailing comma");
        if (!rows.empty() && row.size() != rows.front().size())
            throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(rows.front().size()) +
                              " columns, found " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw FormatError("dataset is empty");
    PointSet p(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return p;
}

PointSet read_points_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open '" + path + "'");
    return read_points_csv(in);
}

void write_points_csv(std::ostream& out, const PointSet& points)
{
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index j = 0; j < points.cols(); ++j)
            out << (j ? "," : "") << format_double(points(i, j));
        out << '\n';
    }
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m, const MultidegreeMatrix& labels)
{
    for (std::size_t k = 0; k < labels.size(); ++k)
        out << (k ? "," : "") << '"' << labels[k].str() << '"';
    out << '\n';
    write_points_csv(out, m);
}

Json to_json(const MultidegreeMatrix& a)
{
    Json arr = Json::array();
    for (const auto& alpha : a.columns())
        arr.push_back(alpha.entries());
    return arr;
}

MultidegreeMatrix multidegree_matrix_from_json(const Json& j)
{
    if (!j.is_array() || j.empty())
        throw FormatError("multidegree matrix must be a nonempty array");
    std::vector<Multidegree> cols;
    for (const auto& c : j) {
        if (!c.is_array())
            throw FormatError("each multidegree must be an array of integers");
        std::vector<int> e;
        for (const auto& x : c) {
            if (!x.is_number_integer() || x.get<long long>() < 0)
                throw FormatError("multidegree entries must be nonnegative integers");
            e.push_back(x.get<int>());
        }
        cols.emplace_back(std::move(e));
    }
    try {
        return MultidegreeMatrix(std::move(cols));
    } catch (const ArgumentError& e) {
        throw FormatError(e.what());
    }
}

Json to_json(const MomentArray& m)
{
    Json arr = Json::array();
    for (const auto& alpha : m.support())
        arr.push_back({{"alpha", alpha.entries()}, {"value", m.at(alpha)}});
    return arr;
}

Json to_json(const FitResult& r, const MultidegreeMatrix& a)
{
    Json j;
    j["method"] = to_string(r.method);
    j["norm"] = to_string(r.norm);
    j["basis"] = to_json(a);
    j["theta"] = vector_json(r.theta);
    j["theta_raw"] = vector_json(r.theta_raw);
    j["sigma_sq_hat"] = r.sigma_sq_hat ? Json(*r.sigma_sq_hat) : Json(nullptr);
    Json d;
    d["smallest_eigenvalue"] = r.diagnostics.smallest_eigenvalue;
    d["gap"] = r.diagnostics.gap;
    d["residual"] = r.diagnostics.residual;
    d["solver"] = r.diagnostics.solver ? Json(to_string(*r.diagnostics.solver)) : Json(nullptr);
    d["multiplicity_warning"] = r.diagnostics.multiplicity_warning;
    d["warnings"] = r.diagnostics.warnings;
    j["diagnostics"] = d;
    return j;
}

Json to_json(const InvarianceReport& r, const MultidegreeMatrix& a)
{
    Json j;
    j["pass"] = r.pass;
    j["sin_angle"] = r.sin_angle;
    j["tolerance"] = r.tolerance;
    j["multiplicity_warning"] = r.multiplicity;
    j["mapped_theta"] = vector_json(r.mapped);
    j["original"] = to_json(r.original, a);
    j["transformed"] = to_json(r.transformed, a);
    return j;
}

FitBasis parse_basis_spec(const std::string& spec)
{
    const std::string s = trim(spec);
    for (const char* prefix : {"triangular:", "degree:", "box:"})
        if (s.rfind(prefix, 0) == 0)
            return FitBasis(parse_basis_shorthand(s));
    if (!s.empty() && (s[0] == '[' || s[0] == '{')) {
        try {
            return basis_from_json(Json::parse(s));
        } catch (const Json::exception& e) {
            throw FormatError(std::string("basis JSON: ") + e.what());
        }
    }
    return basis_from_json(read_json_file(s));
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw FormatError("'" + path + "': " + e.what());
    }
}

ExperimentConfig experiment_config_from_json(const Json& j)
{
    if (!j.is_object())
        throw FormatError("experiment config must be a JSON object");
    ExperimentConfig c;
    try {
        if (j.contains("curve"))
            c.curve.kind = curve_kind_from_string(j.at("curve").get<std::string>());
        if (c.curve.kind == CurveKind::custom_parametric)
            throw FormatError("custom_parametric curves cannot be described in a config file");
        if (c.curve.kind == CurveKind::special_data)
            throw FormatError("special_data has no true curve to measure spread against");
        if (c.curve.kind == CurveKind::hyperplane_union)
            c.basis = MultidegreeMatrix::from_set(degree_set(3, 3));
        if (j.contains("basis")) {
            const Json& b = j.at("basis");
            c.basis = b.is_string() ? parse_basis_spec(b.get<std::string>()).monomials
                                    : multidegree_matrix_from_json(b);
        }
        if (j.contains("noise"))
            c.noise = noise_kind_from_string(j.at("noise").get<std::string>());
        if (j.contains("sigma"))
            c.sigma = j.at("sigma").get<double>();
        if (j.contains("sigma0"))
            c.sigma0 = matrix_from_json(j.at("sigma0"), "sigma0");
        if (j.contains("norm")) {
            const auto n = j.at("norm").get<std::string>();
            if (n == "euclidean")
                c.norm = NormKind::euclidean;
            else if (n == "bombieri")
                c.norm = NormKind::bombieri;
            else
                throw FormatError("unknown norm '" + n + "'");
        }
        if (j.contains("methods")) {
            c.methods.clear();
            for (const auto& m : j.at("methods")) {
                const auto name = m.get<std::string>();
                if (name == "ols")
                    c.methods.push_back(FitMethod::ols);
                else if (name == "als")
                    c.methods.push_back(FitMethod::als);
                else if (name == "als-sigma")
                    c.methods.push_back(FitMethod::als_known_sigma);
                else
                    throw FormatError("unknown method '" + name + "'");
            }
        }
        if (j.contains("n_list"))
            c.n_list = j.at("n_list").get<std::vector<std::size_t>>();
        if (j.contains("sigma_list"))
            c.sigma_list = j.at("sigma_list").get<std::vector<double>>();
        if (j.contains("n"))
            c.n = j.at("n").get<std::size_t>();
        if (j.contains("realizations"))
            c.realizations = j.at("realizations").get<int>();
        if (j.contains("seed"))
            c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("threads"))
            c.threads = j.at("threads").get<unsigned>();
    } catch (const Json::exception& e) {
        throw FormatError(std::string("experiment config: ") + e.what());
    } catch (const ArgumentError& e) {
        throw FormatError(std::string("experiment config: ") + e.what());
    }
    return c;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t config_seed)
{
    if (flag)
        return *flag;
    if (const char* env = std::getenv("HYPERFIT_SEED")) {
        std::uint64_t v = 0;
        const std::string s = trim(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
            throw ArgumentError("HYPERFIT_SEED must be an unsigned integer");
        return v;
    }
    return config_seed;
}

}  // namespace hyperfit
