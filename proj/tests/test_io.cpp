#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "hyperfit/errors.hpp"
#include "hyperfit/io.hpp"
#include "support.hpp"

using namespace hyperfit;

namespace {

PointSet parse(const std::string& text)
{
    std::istringstream in(text);
    return read_points_csv(in);
}

}  // namespace

TEST_CASE("points CSV parsing")
{
    const PointSet p = parse("1,2\n\n 3.5 , -4e-3\n+5,6\n");
    REQUIRE(p.rows() == 3);
    REQUIRE(p.cols() == 2);
    CHECK(p(1, 0) == 3.5);
    CHECK(p(1, 1) == -4e-3);
    CHECK(p(2, 0) == 5.0);

    CHECK_THROWS_AS(parse(""), FormatError);
    CHECK_THROWS_AS(parse("\n\n"), FormatError);
    CHECK_THROWS_AS(parse("1,2\n3\n"), FormatError);
    CHECK_THROWS_AS(parse("1,2,\n"), FormatError);
    CHECK_THROWS_AS(parse("1,x\n"), FormatError);
    CHECK_THROWS_AS(parse("1,2\n3,4,5\n"), FormatError);
    try {
        (void)parse("1,2\n3,4\n5\n");
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(read_points_csv_file("/nonexistent/points.csv"), FormatError);
}

TEST_CASE("points CSV round trip is exact")
{
    testsupport::Rng rng(91);
    PointSet p = rng.points(30, 3, -1e3, 1e3);
    p(0, 0) = 0.1;
    p(0, 1) = std::numeric_limits<double>::denorm_min();
    p(0, 2) = -std::numeric_limits<double>::max();
    std::ostringstream out;
    write_points_csv(out, p);
    CHECK(parse(out.str()) == p);
}

TEST_CASE("matrix CSV has a quoted label header")
{
    const MultidegreeMatrix a({{1, 0}, {0, 0}});
    std::ostringstream out;
    write_matrix_csv(out, Eigen::Matrix2d::Identity(), a);
    const std::string s = out.str();
    const auto nl = s.find('\n');
    CHECK(s.substr(0, nl) == "\"" + a[0].str() + "\",\"" + a[1].str() + "\"");
    CHECK(s.substr(nl + 1) == "1,0\n0,1\n");
}

TEST_CASE("JSON for multidegree matrices and moments")
{
    const auto a = MultidegreeMatrix::from_set(triangular_set(2, 2));
    const Json j = to_json(a);
    CHECK(j.size() == 6);
    CHECK(j[0] == Json::array({2, 0}));
    CHECK(j[5] == Json::array({0, 0}));
    CHECK(multidegree_matrix_from_json(j).columns() == a.columns());
    CHECK_THROWS_AS(multidegree_matrix_from_json(Json::parse("[[1,0],[1]]")), FormatError);
    CHECK_THROWS_AS(multidegree_matrix_from_json(Json::parse("[[-1,0]]")), FormatError);
    CHECK_THROWS_AS(multidegree_matrix_from_json(Json::parse("\"x\"")), FormatError);

    PointSet d(2, 1);
    d << 1, 3;
    const auto m = moment_array(d, triangular_set(1, 2));
    const Json mj = to_json(m);
    REQUIRE(mj.size() == 3);
    double total = 0.0;
    for (const auto& e : mj) {
        const int k = e.at("alpha")[0].get<int>();
        const double want = k == 0 ? 2.0 : (k == 1 ? 4.0 : 10.0);
        CHECK(e.at("value").get<double>() == want);
        total += e.at("value").get<double>();
    }
    CHECK(total == 16.0);
}

TEST_CASE("JSON for fit results")
{
    PointSet d(2, 1);
    d << 1, 3;
    const auto a = MultidegreeMatrix::from_set(triangular_set(1, 1));
    const auto r = fit_als(d, a, NoiseModelSpec::isotropic(1), NormWeights::euclidean(2));
    const Json j = to_json(r, a);
    CHECK(j.at("method") == "als");
    CHECK(j.at("norm") == "euclidean");
    CHECK(j.at("basis") == to_json(a));
    CHECK(j.at("theta").size() == 2);
    CHECK(j.at("sigma_sq_hat").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("diagnostics").contains("solver"));
    const Json o = to_json(fit_ols(d, a, NormWeights::euclidean(2)), a);
    CHECK(o.at("sigma_sq_hat").is_null());
}

TEST_CASE("parse_basis_spec")
{
    CHECK(parse_basis_spec("triangular:2:2").monomials.columns() ==
          MultidegreeMatrix::from_set(triangular_set(2, 2)).columns());
    CHECK(parse_basis_spec("degree:3:3").size() == 10);
    CHECK(parse_basis_spec("box:2,1").size() == 6);
    CHECK(parse_basis_spec(" [[1,0],[0,1],[0,0]] ").size() == 3);

    const auto withf = parse_basis_spec(R"({"monomials": [[1],[0]], "F": [[1,0],[1,1]]})");
    REQUIRE(withf.f.has_value());
    CHECK((*withf.f)(1, 0) == 1.0);

    const std::string path = "test_io_basis.json";
    {
        std::ofstream f(path);
        f << R"({"monomials": [[2],[1],[0]]})";
    }
    CHECK(parse_basis_spec(path).size() == 3);
    std::remove(path.c_str());

    CHECK_THROWS_AS(parse_basis_spec("triangular:2"), ArgumentError);
    CHECK_THROWS_AS(parse_basis_spec("[[1,0],"), FormatError);
    CHECK_THROWS_AS(parse_basis_spec("no_such_file.json"), FormatError);
}

TEST_CASE("experiment config parsing")
{
    const auto c = experiment_config_from_json(Json::parse(R"({
        "curve": "eight_curve", "basis": "triangular:2:4", "noise": "uniform", "sigma": 0.02,
        "norm": "euclidean", "methods": ["ols", "als-sigma", "als"], "n_list": [10, 20],
        "sigma_list": [0.1], "n": 50, "realizations": 3, "seed": 17, "threads": 2})"));
    CHECK(c.curve.kind == CurveKind::eight_curve);
    CHECK(c.basis.size() == 15);
    CHECK(c.noise == NoiseKind::uniform);
    CHECK(c.sigma == 0.02);
    CHECK(c.norm == NormKind::euclidean);
    CHECK(c.methods == std::vector<FitMethod>{FitMethod::ols, FitMethod::als_known_sigma, FitMethod::als});
    CHECK(c.n_list == std::vector<std::size_t>{10, 20});
    CHECK(c.n == 50);
    CHECK(c.realizations == 3);
    CHECK(c.seed == 17);
    CHECK(c.threads == 2);

    const auto d = experiment_config_from_json(Json::parse(R"({"curve": "hyperplane_union"})"));
    CHECK(d.basis.size() == 10);
    CHECK(d.norm == NormKind::bombieri);
    const auto s0 = experiment_config_from_json(Json::parse(R"({"sigma0": [[2,0],[0,1]]})"));
    CHECK(s0.sigma0(0, 0) == 2.0);

    CHECK_THROWS_AS(experiment_config_from_json(Json::parse("[]")), FormatError);
    CHECK_THROWS_AS(experiment_config_from_json(Json::parse(R"({"curve": "special_data"})")), FormatError);
    CHECK_THROWS_AS(experiment_config_from_json(Json::parse(R"({"norm": "custom"})")), FormatError);
    CHECK_THROWS_AS(experiment_config_from_json(Json::parse(R"({"methods": ["lsq"]})")), FormatError);
    CHECK_THROWS_AS(experiment_config_from_json(Json::parse(R"({"sigma": "big"})")), FormatError);
    CHECK_THROWS_AS(read_json_file("/nonexistent.json"), FormatError);
}

TEST_CASE("seed precedence")
{
    ::unsetenv("HYPERFIT_SEED");
    CHECK(resolve_seed(std::nullopt, 5) == 5);
    CHECK(resolve_seed(9, 5) == 9);
    ::setenv("HYPERFIT_SEED", "123", 1);
    CHECK(resolve_seed(std::nullopt, 5) == 123);
    CHECK(resolve_seed(9, 5) == 9);
    ::setenv("HYPERFIT_SEED", "abc", 1);
    CHECK_THROWS_AS(resolve_seed(std::nullopt, 5), ArgumentError);
    ::unsetenv("HYPERFIT_SEED");
}
