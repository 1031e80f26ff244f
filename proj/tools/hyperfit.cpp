#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperfit/errors.hpp"
#include "hyperfit/estimators.hpp"
#include "hyperfit/experiments.hpp"
#include "hyperfit/io.hpp"
#include "hyperfit/quasihankel.hpp"
#include "hyperfit/transforms.hpp"

namespace {

using namespace hyperfit;

constexpr int exit_usage = 2;
constexpr int exit_data = 3;
constexpr int exit_numerical = 4;

// Thrown for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitOptions {
    std::string input;
    std::string basis;
    std::string method = "ols";
    std::string norm = "bombieri";
    std::string weights;
    std::string sigma0;
    std::optional<double> sigma;
    std::string output;
};

struct TransformOptions {
    std::optional<double> rotate;
    std::string translate;
    std::optional<double> scale;
    std::string transform_file;
    double tol = 1e-8;
};

struct SweepOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string output;
};

std::vector<double> parse_list(const std::string& s, const char* what)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            std::size_t pos = 0;
            v.push_back(std::stod(field, &pos));
            if (pos != field.size())
                throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw UsageError(std::string("cannot parse ") + what + " entry '" + field + "'");
        }
    }
    if (v.empty())
        throw UsageError(std::string(what) + " is empty");
    return v;
}

// "diag:a,b,..." or rows "a,b;c,d" or a JSON file holding an array of rows.
Eigen::MatrixXd parse_sigma0(const std::string& s)
{
    if (s.rfind("diag:", 0) == 0) {
        const auto d = parse_list(s.substr(5), "Sigma_0 diagonal");
        return Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size())).asDiagonal();
    }
    if (s.find_first_of(",;") != std::string::npos && s.find_first_not_of("0123456789.eE+-,; ") == std::string::npos) {
        std::vector<std::vector<double>> rows;
        std::stringstream ss(s);
        std::string row;
        while (std::getline(ss, row, ';'))
            rows.push_back(parse_list(row, "Sigma_0 row"));
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.front().size())
                throw UsageError("Sigma_0 rows differ in length");
            for (std::size_t j = 0; j < rows[i].size(); ++j)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
        return m;
    }
    const Json j = read_json_file(s);
    if (!j.is_array() || j.empty())
        throw FormatError("Sigma_0 file must hold an array of rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (j[i].size() != j[0].size())
            throw FormatError("Sigma_0 rows differ in length");
        for (std::size_t k = 0; k < j[i].size(); ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
    }
    return m;
}

NormWeights make_weights(const FitOptions& o, const FitBasis& basis)
{
    if (!o.weights.empty()) {
        const auto w = parse_list(o.weights, "weights");
        return NormWeights::custom(Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())));
    }
    if (o.norm == "bombieri") {
        if (basis.f)
            throw UsageError("the Bombieri norm applies to monomial bases only");
        return bombieri_weights(basis.monomials);
    }
    return NormWeights::euclidean(basis.size());
}

NoiseModelSpec make_noise(const FitOptions& o, std::size_t q)
{
    if (o.sigma0.empty())
        return NoiseModelSpec::isotropic(q);
    return reduce_covariance(parse_sigma0(o.sigma0));
}

FitProcedure make_fit(const FitOptions& o, const FitBasis& basis, const NormWeights& w)
{
    if (o.method == "als-sigma" && !o.sigma)
        throw UsageError("--method als-sigma requires --sigma");
    const std::string method = o.method;
    const std::optional<double> sigma = o.sigma;
    const std::string sigma0 = o.sigma0;
    return [=](const PointSet& d) {
        FitOptions opts;
        opts.sigma0 = sigma0;
        if (method == "ols")
            return fit_ols(d, basis, w);
        const auto noise = make_noise(opts, static_cast<std::size_t>(d.cols()));
        if (method == "als-sigma")
            return fit_als_known_sigma(d, basis, noise, *sigma, w);
        return fit_als(d, basis, noise, w);
    };
}

FitBasis basis_flag(const std::string& spec)
{
    try {
        return parse_basis_spec(spec);
    } catch (const ArgumentError& e) {
        throw UsageError(e.what());
    }
}

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw FormatError("cannot write '" + path + "'");
    out << text;
}

AffineTransform make_transform(const TransformOptions& t, std::size_t q)
{
    const int given = (t.rotate ? 1 : 0) + (t.translate.empty() ? 0 : 1) + (t.scale ? 1 : 0) +
                      (t.transform_file.empty() ? 0 : 1);
    if (given != 1)
        throw UsageError("give exactly one of --rotate, --translate, --scale, --transform");
    if (t.rotate) {
        if (q != 2)
            throw UsageError("--rotate applies to planar data");
        return AffineTransform::rotation2d(*t.rotate);
    }
    if (!t.translate.empty()) {
        const auto h = parse_list(t.translate, "translation");
        return AffineTransform::translation(Eigen::Map<const Eigen::VectorXd>(h.data(), static_cast<Eigen::Index>(h.size())));
    }
    if (t.scale)
        return AffineTransform::scaling(q, *t.scale);
    const Json j = read_json_file(t.transform_file);
    if (!j.contains("K") || !j.contains("h"))
        throw FormatError("transform file needs \"K\" and \"h\"");
    const auto hv = j.at("h").get<std::vector<double>>();
    Eigen::MatrixXd k(static_cast<Eigen::Index>(hv.size()), static_cast<Eigen::Index>(hv.size()));
    const auto rows = j.at("K").get<std::vector<std::vector<double>>>();
    if (rows.size() != hv.size())
        throw FormatError("transform K and h sizes differ");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != hv.size())
            throw FormatError("transform K must be square");
        for (std::size_t c = 0; c < hv.size(); ++c)
            k(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    return {k, Eigen::Map<const Eigen::VectorXd>(hv.data(), static_cast<Eigen::Index>(hv.size()))};
}

void add_fit_flags(CLI::App* sub, FitOptions& o, bool with_output = true)
{
    sub->add_option("--input", o.input, "Dataset CSV (one point per row)")->required();
    sub->add_option("--basis", o.basis, "Basis: triangular:q:l, degree:q:l, box:g1,..., or JSON")->required();
    sub->add_option("--method", o.method, "ols, als-sigma or als")
        ->check(CLI::IsMember({"ols", "als-sigma", "als"}));
    sub->add_option("--norm", o.norm, "euclidean or bombieri")->check(CLI::IsMember({"euclidean", "bombieri"}));
    sub->add_option("--weights", o.weights, "Custom norm weights w1,...,wm");
    sub->add_option("--sigma", o.sigma, "Noise level for als-sigma")->check(CLI::NonNegativeNumber);
    sub->add_option("--sigma0", o.sigma0, "Noise shape: diag:a,b | a,b;c,d | JSON file");
    if (with_output)
        sub->add_option("--output", o.output, "Output path (default stdout)");
}

void add_sweep_flags(CLI::App* sub, SweepOptions& o)
{
    sub->add_option("--config", o.config, "Experiment config JSON")->required();
    sub->add_option("--seed", o.seed, "Master seed (overrides HYPERFIT_SEED and the config)");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    sub->add_option("--output", o.output, "Output CSV path (default stdout)");
}

std::string run_sweep(const SweepOptions& o, bool over_n)
{
    auto cfg = experiment_config_from_json(read_json_file(o.config));
    cfg.seed = resolve_seed(o.seed, cfg.seed);
    if (o.threads)
        cfg.threads = *o.threads;
    return to_csv(over_n ? consistency_sweep(cfg) : sigma_sweep(cfg));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Algebraic hypersurface fitting with bias-corrected least squares"};
    app.require_subcommand(1);

    FitOptions fit_opts;
    auto* fit = app.add_subcommand("fit", "Fit a hypersurface and print a JSON report");
    add_fit_flags(fit, fit_opts);

    FitOptions inv_opts;
    TransformOptions tr;
    auto* inv = app.add_subcommand("invariance", "Check that a fit commutes with an affine map");
    add_fit_flags(inv, inv_opts);
    inv->add_option("--rotate", tr.rotate, "Rotation angle in radians (planar data)");
    inv->add_option("--translate", tr.translate, "Translation vector h1,...,hq");
    inv->add_option("--scale", tr.scale, "Uniform scale factor");
    inv->add_option("--transform", tr.transform_file, "JSON file {\"K\": [[...]], \"h\": [...]}");
    inv->add_option("--tol", tr.tol, "Pass threshold on sin of the angle");

    SweepOptions sn;
    auto* sweep_n = app.add_subcommand("sweep-n", "Consistency sweep over N; CSV output");
    add_sweep_flags(sweep_n, sn);
    SweepOptions ss;
    auto* sweep_s = app.add_subcommand("sweep-sigma", "Sweep over sigma; CSV output");
    add_sweep_flags(sweep_s, ss);

    FitOptions mom_opts;
    auto* moments = app.add_subcommand("moments", "Raw moments on A + A as JSON");
    moments->add_option("--input", mom_opts.input, "Dataset CSV")->required();
    moments->add_option("--basis", mom_opts.basis, "Basis spec")->required();
    moments->add_option("--output", mom_opts.output, "Output path (default stdout)");

    FitOptions psi_opts;
    auto* psi = app.add_subcommand("psi", "Psi(D) or the adjusted Psi(D, sigma) as CSV");
    psi->add_option("--input", psi_opts.input, "Dataset CSV")->required();
    psi->add_option("--basis", psi_opts.basis, "Basis spec")->required();
    psi->add_option("--sigma", psi_opts.sigma, "Noise level; omit for the raw matrix")->check(CLI::NonNegativeNumber);
    psi->add_option("--sigma0", psi_opts.sigma0, "Noise shape: diag:a,b | a,b;c,d | JSON file");
    psi->add_option("--output", psi_opts.output, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (fit->parsed()) {
            const auto basis = basis_flag(fit_opts.basis);
            const auto w = make_weights(fit_opts, basis);
            const auto proc = make_fit(fit_opts, basis, w);
            const auto points = read_points_csv_file(fit_opts.input);
            auto r = proc(points);
            if (!fit_opts.weights.empty())
                r.norm = NormKind::custom;
            emit(fit_opts.output, to_json(r, basis.monomials).dump(2) + "\n");
        } else if (inv->parsed()) {
            const auto basis = basis_flag(inv_opts.basis);
            if (basis.f)
                throw UsageError("invariance checks need a monomial basis");
            const auto w = make_weights(inv_opts, basis);
            const auto proc = make_fit(inv_opts, basis, w);
            const auto points = read_points_csv_file(inv_opts.input);
            const auto t = make_transform(tr, static_cast<std::size_t>(points.cols()));
            const auto rep = check_invariance(proc, points, t, basis.monomials, tr.tol);
            emit(inv_opts.output, to_json(rep, basis.monomials).dump(2) + "\n");
        } else if (sweep_n->parsed()) {
            emit(sn.output, run_sweep(sn, true));
        } else if (sweep_s->parsed()) {
            emit(ss.output, run_sweep(ss, false));
        } else if (moments->parsed()) {
            const auto basis = basis_flag(mom_opts.basis);
            const auto points = read_points_csv_file(mom_opts.input);
            const auto a = basis.monomials.as_set();
            const auto m = moment_array(points, minkowski_sum(a, a));
            emit(mom_opts.output, to_json(m).dump(2) + "\n");
        } else if (psi->parsed()) {
            const auto basis = basis_flag(psi_opts.basis);
            const auto points = read_points_csv_file(psi_opts.input);
            Eigen::MatrixXd mat;
            if (psi_opts.sigma) {
                const auto coeffs = psi_polynomial(points, basis, make_noise(psi_opts, static_cast<std::size_t>(points.cols())));
                mat = eval_matrix_polynomial(coeffs, *psi_opts.sigma * *psi_opts.sigma);
            } else {
                mat = ols_matrix(points, basis);
            }
            std::ostringstream out;
            if (basis.f)
                write_points_csv(out, mat);
            else
                write_matrix_csv(out, mat, basis.monomials);
            emit(psi_opts.output, out.str());
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    }
    return 0;
}
