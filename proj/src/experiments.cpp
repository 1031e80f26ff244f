#include "hyperfit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "hyperfit/errors.hpp"
#include "hyperfit/spectral.hpp"

namespace hyperfit {

const char* to_string(CurveKind k)
{
    switch (k) {
    case CurveKind::special_data:
        return "special_data";
    case CurveKind::parabola_conic:
        return "parabola_conic";
    case CurveKind::eight_curve:
        return "eight_curve";
    case CurveKind::hyperplane_union:
        return "hyperplane_union";
    case CurveKind::custom_parametric:
        return "custom_parametric";
    }
    return "unknown";
}

CurveKind curve_kind_from_string(const std::string& name)
{
    for (auto k : {CurveKind::special_data, CurveKind::parabola_conic, CurveKind::eight_curve,
                   CurveKind::hyperplane_union, CurveKind::custom_parametric})
        if (name == to_string(k))
            return k;
    throw ArgumentError("unknown curve kind '" + name + "'");
}

const char* to_string(NoiseKind k)
{
    return k == NoiseKind::gaussian ? "gaussian" : "uniform";
}

NoiseKind noise_kind_from_string(const std::string& name)
{
    if (name == "gaussian")
        return NoiseKind::gaussian;
    if (name == "uniform")
        return NoiseKind::uniform;
    throw ArgumentError("unknown noise kind '" + name + "'");
}

namespace {

Eigen::MatrixXd hyperplane_normals()
{
    const double r2 = std::sqrt(2.0);
    const double r3 = std::sqrt(3.0);
    Eigen::MatrixXd b(3, 3);
    b << 0.0, 1.0, 0.0, r2, r2, 0.0, r3, r3, r3;
    return b;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Neumaier summation.
class CompensatedSum {
public:
    void add(double v)
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            c_ += (sum_ - t) + v;
        else
            c_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + c_; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

}  // namespace

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b, std::uint64_t c)
{
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ a);
    s = splitmix64(s ^ b);
    return splitmix64(s ^ c);
}

std::size_t curve_dimension(const CurveSpec& spec)
{
    switch (spec.kind) {
    case CurveKind::hyperplane_union:
        return 3;
    case CurveKind::custom_parametric:
        if (!spec.parametrization)
            throw ArgumentError("custom_parametric curve needs a parametrization");
        return static_cast<std::size_t>(spec.parametrization(0.0).size());
    default:
        return 2;
    }
}

PointSet generate_true_points(const CurveSpec& spec, std::size_t n, std::uint64_t seed)
{
    if (spec.kind == CurveKind::special_data) {
        PointSet d(8, 2);
        d << 1, 7, 2, 6, 5, 8, 7, 7, 9, 5, 3, 7, 6, 2, 8, 4;
        return d;
    }
    if (n == 0)
        throw ArgumentError("number of points must be at least 1");
    const auto rows = static_cast<Eigen::Index>(n);
    const double pi = std::numbers::pi;
    switch (spec.kind) {
    case CurveKind::parabola_conic: {
        PointSet d(rows, 2);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double t = n == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
            d(i, 0) = t;
            d(i, 1) = t * t;
        }
        return d;
    }
    case CurveKind::eight_curve: {
        PointSet d(rows, 2);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n);
            d(i, 0) = std::sin(2.0 * pi * t);
            d(i, 1) = std::sin(2.0 * pi * t) * std::cos(2.0 * pi * t);
        }
        return d;
    }
    case CurveKind::hyperplane_union: {
        const Eigen::MatrixXd b = hyperplane_normals();
        // Columns 1, 2 of Q span the plane orthogonal to b.
        std::vector<Eigen::MatrixXd> frames;
        for (Eigen::Index p = 0; p < 3; ++p) {
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(b.row(p).transpose());
            const Eigen::MatrixXd qm = qr.householderQ();
            frames.push_back(qm.rightCols(2));
        }
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> plane(0, 2);
        std::uniform_real_distribution<double> coord(-0.5, 0.5);
        PointSet d(rows, 3);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const int p = plane(rng);
            const double u = coord(rng);
            const double v = coord(rng);
            d.row(i) = (u * frames[static_cast<std::size_t>(p)].col(0) + v * frames[static_cast<std::size_t>(p)].col(1))
                           .transpose();
        }
        return d;
    }
    case CurveKind::custom_parametric: {
        const auto q = static_cast<Eigen::Index>(curve_dimension(spec));
        PointSet d(rows, q);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const Eigen::VectorXd p = spec.parametrization(static_cast<double>(i) / static_cast<double>(n));
            if (p.size() != q)
                throw ArgumentError("custom parametrization changed dimension");
            d.row(i) = p.transpose();
        }
        return d;
    }
    case CurveKind::special_data:
        break;
    }
    throw ArgumentError("unknown curve kind");
}

Polynomial true_polynomial(const CurveSpec& spec)
{
    switch (spec.kind) {
    case CurveKind::special_data:
        throw ArgumentError("special_data has no true polynomial");
    case CurveKind::parabola_conic: {
        Polynomial p(2);
        p.add_term({0, 1}, 1.0);
        p.add_term({2, 0}, -1.0);
        return p;
    }
    case CurveKind::eight_curve: {
        Polynomial p(2);
        p.add_term({4, 0}, 1.0);
        p.add_term({2, 0}, -1.0);
        p.add_term({0, 2}, 1.0);
        return p;
    }
    case CurveKind::hyperplane_union: {
        const Eigen::MatrixXd b = hyperplane_normals();
        Polynomial p = Polynomial::constant(3, 1.0);
        for (Eigen::Index i = 0; i < 3; ++i)
            p = p * Polynomial::affine(b.row(i).transpose(), 0.0);
        return p;
    }
    case CurveKind::custom_parametric:
        if (!spec.implicit)
            throw ArgumentError("custom curve has no implicit equation");
        return *spec.implicit;
    }
    throw ArgumentError("unknown curve kind");
}

Eigen::VectorXd true_theta(const CurveSpec& spec, const MultidegreeMatrix& a)
{
    const Polynomial p = true_polynomial(spec);
    if (p.dim() != a.dim())
        throw ArgumentError("basis dimension does not match the curve");
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(a.size()));
    for (const auto& [alpha, c] : p.terms()) {
        const int k = a.index_of(alpha);
        if (k < 0)
            throw ArgumentError("true polynomial term " + alpha.str() + " is outside the basis");
        theta[k] = c;
    }
    return theta;
}

PointSet add_noise(const PointSet& points, const NoiseSpec& noise, const Eigen::MatrixXd& sigma0)
{
    if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma))
        throw ArgumentError("noise sigma must be finite and nonnegative");
    const Eigen::Index q = points.cols();
    const NoiseModelSpec model =
        sigma0.size() == 0 ? NoiseModelSpec::isotropic(static_cast<std::size_t>(q)) : reduce_covariance(sigma0);
    if (model.k.rows() != q)
        throw ArgumentError("Sigma_0 dimension does not match the data");
    if (noise.sigma == 0.0)
        return points;

    const Eigen::MatrixXd map = noise.sigma * model.k.leftCols(model.s);
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double a = std::sqrt(3.0);
    std::uniform_real_distribution<double> uniform(-a, a);

    PointSet out = points;
    Eigen::VectorXd z(model.s);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index j = 0; j < model.s; ++j)
            z[j] = noise.kind == NoiseKind::gaussian ? normal(rng) : uniform(rng);
        out.row(i) += (map * z).transpose();
    }
    return out;
}

double spread(const std::vector<Eigen::VectorXd>& theta_hats, const Eigen::VectorXd& theta_true)
{
    if (theta_hats.empty())
        throw ArgumentError("spread needs at least one estimate");
    if (theta_true.norm() == 0.0)
        throw ArgumentError("spread: true coefficient vector is zero");
    CompensatedSum sum;
    for (const auto& t : theta_hats) {
        if (t.size() != theta_true.size())
            throw ArgumentError("spread: length mismatch");
        if (t.norm() == 0.0)
            throw ArgumentError("spread: estimate is the zero vector");
        const double s = sin_angle(t, theta_true);
        sum.add(s * s);
    }
    return sum.value() / static_cast<double>(theta_hats.size());
}

namespace {

struct Outcome {
    bool ok = false;
    Eigen::VectorXd theta;
    double sigma_sq_hat = std::numeric_limits<double>::quiet_NaN();
};

struct CellSetup {
    const ExperimentConfig* config;
    NoiseModelSpec model;
    NormWeights weights;
    Eigen::VectorXd theta_true;
};

Outcome run_method(const PointSet& data, FitMethod method, double sigma, const CellSetup& setup)
{
    Outcome o;
    try {
        const FitBasis basis(setup.config->basis);
        const FitResult r = [&] {
            switch (method) {
            case FitMethod::als_known_sigma:
                return fit_als_known_sigma(data, basis, setup.model, sigma, setup.weights);
            case FitMethod::als:
                return fit_als(data, basis, setup.model, setup.weights);
            case FitMethod::ols:
                break;
            }
            return fit_ols(data, basis, setup.weights);
        }();
        o.theta = r.theta;
        if (r.sigma_sq_hat)
            o.sigma_sq_hat = *r.sigma_sq_hat;
        o.ok = r.theta.allFinite() && r.theta.norm() > 0.0;
    } catch (const NumericalError&) {
        o.ok = false;
    }
    return o;
}

// outcomes[j][m] for realization j and method m; filled in parallel, read in order.
std::vector<std::vector<Outcome>> run_cell(const CellSetup& setup, std::size_t n, double sigma,
                                           std::uint64_t cell)
{
    const ExperimentConfig& cfg = *setup.config;
    const auto m = static_cast<std::size_t>(cfg.realizations);
    std::vector<std::vector<Outcome>> outcomes(m);

    auto work = [&](std::size_t j) {
        const PointSet truth = generate_true_points(cfg.curve, n, substream_seed(cfg.seed, cell, j, 0));
        const NoiseSpec ns{cfg.noise, sigma, substream_seed(cfg.seed, cell, j, 1)};
        const PointSet data = add_noise(truth, ns, cfg.sigma0);
        auto& row = outcomes[j];
        for (auto method : cfg.methods)
            row.push_back(run_method(data, method, sigma, setup));
    };

    unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, m));
    if (threads <= 1) {
        for (std::size_t j = 0; j < m; ++j)
            work(j);
        return outcomes;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t j = t; j < m; j += threads)
                    work(j);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return outcomes;
}

CellSetup make_setup(const ExperimentConfig& cfg)
{
    if (cfg.realizations < 1)
        throw ArgumentError("number of realizations must be at least 1");
    if (cfg.methods.empty())
        throw ArgumentError("no methods requested");
    if (cfg.basis.dim() != curve_dimension(cfg.curve))
        throw ArgumentError("basis dimension does not match the curve");
    CellSetup s{&cfg, {}, {}, true_theta(cfg.curve, cfg.basis)};
    s.model = cfg.sigma0.size() == 0 ? NoiseModelSpec::isotropic(cfg.basis.dim()) : reduce_covariance(cfg.sigma0);
    switch (cfg.norm) {
    case NormKind::bombieri:
        s.weights = bombieri_weights(cfg.basis);
        break;
    case NormKind::euclidean:
        s.weights = NormWeights::euclidean(cfg.basis.size());
        break;
    case NormKind::custom:
        throw ArgumentError("experiments support the euclidean and bombieri norms only");
    }
    return s;
}

std::vector<ExperimentRow> summarize(const std::vector<std::vector<Outcome>>& outcomes, const CellSetup& setup,
                                     double x, double sigma)
{
    const ExperimentConfig& cfg = *setup.config;
    std::vector<ExperimentRow> rows;
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        ExperimentRow row;
        row.x = x;
        row.method = cfg.methods[mi];
        row.realizations = cfg.realizations;
        std::vector<Eigen::VectorXd> thetas;
        CompensatedSum sq;
        bool has_sigma = false;
        for (const auto& real : outcomes) {
            const auto& o = real[mi];
            if (!o.ok) {
                ++row.failures;
                continue;
            }
            thetas.push_back(o.theta);
            if (!std::isnan(o.sigma_sq_hat)) {
                has_sigma = true;
                const double e = o.sigma_sq_hat - sigma * sigma;
                sq.add(e * e);
            }
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.spread = thetas.empty() ? nan : spread(thetas, setup.theta_true);
        row.rmse_sigma2 = has_sigma ? std::sqrt(sq.value() / static_cast<double>(thetas.size())) : nan;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

ExperimentResult consistency_sweep(const ExperimentConfig& config)
{
    const CellSetup setup = make_setup(config);
    if (config.n_list.empty())
        throw ArgumentError("consistency sweep needs a list of N values");
    ExperimentResult res;
    res.axis = SweepAxis::n;
    for (std::size_t c = 0; c < config.n_list.size(); ++c) {
        const std::size_t n = config.n_list[c];
        const auto outcomes = run_cell(setup, n, config.sigma, c);
        for (auto& row : summarize(outcomes, setup, static_cast<double>(n), config.sigma))
            res.rows.push_back(row);
    }
    return res;
}

ExperimentResult sigma_sweep(const ExperimentConfig& config)
{
    const CellSetup setup = make_setup(config);
    if (config.sigma_list.empty())
        throw ArgumentError("sigma sweep needs a list of sigma values");
    ExperimentResult res;
    res.axis = SweepAxis::sigma;
    for (std::size_t c = 0; c < config.sigma_list.size(); ++c) {
        const double sigma = config.sigma_list[c];
        if (!(sigma >= 0.0) || !std::isfinite(sigma))
            throw ArgumentError("sigma values must be finite and nonnegative");
        const auto outcomes = run_cell(setup, config.n, sigma, c);
        for (auto row : summarize(outcomes, setup, sigma, sigma)) {
            row.spread /= sigma;
            row.rmse_sigma2 /= sigma * sigma;
            res.rows.push_back(row);
        }
    }
    return res;
}

std::string to_csv(const ExperimentResult& result)
{
    std::ostringstream out;
    out << (result.axis == SweepAxis::n ? "N,method,spread,rmse_sigma2\n" : "sigma,method,rel_spread,rel_rmse_sigma2\n");
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : result.rows) {
        if (result.axis == SweepAxis::n)
            out << static_cast<std::uint64_t>(r.x);
        else
            out << num(r.x);
        out << ',' << to_string(r.method) << ',' << num(r.spread) << ',' << num(r.rmse_sigma2) << '\n';
    }
    return out.str();
}

}  // namespace hyperfit
