#include "xmom/ident.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "xmom/errors.hpp"
#include "xmom/mehler.hpp"

namespace xmom {

namespace {

constexpr double kDefaultOrderFloor = 1e-3; // default order: largest n with rho^n >= this
constexpr double kRidgeScale = 1e-10;
constexpr double kMaxCondition = 1e10;

MomentEstimate batch_score(int64_t n, int batches,
                           const std::function<double(int64_t, int64_t)>& eval) {
    const double full = eval(0, n);
    const int b = std::max<int>(2, static_cast<int>(std::min<int64_t>(batches, n / 2)));
    long double sum = 0.0L, sumsq = 0.0L;
    for (int k = 0; k < b; ++k) {
        const int64_t lo = n * k / b;
        const int64_t hi = n * (k + 1) / b;
        const double v = eval(lo, hi);
        sum += v;
        sumsq += static_cast<long double>(v) * v;
    }
    const long double mean = sum / b;
    long double var = (sumsq - b * mean * mean) / (b - 1);
    if (var < 0.0L) var = 0.0L;
    MomentEstimate est;
    est.value = full;
    est.se = static_cast<double>(std::sqrt(static_cast<double>(var / b)));
    return est;
}

} // namespace

double alpha_from_snr(double sigma_x2, double sigma_w2) {
    if (!(sigma_x2 > 0.0))
        throw PreconditionError("alpha_from_snr: sigma_x2 must be > 0");
    if (!(sigma_w2 >= 0.0))
        throw PreconditionError("alpha_from_snr: sigma_w2 must be >= 0");
    return std::sqrt((sigma_x2 + sigma_w2) / sigma_x2);
}

MomentEstimate k1_score(const ChainDataset& ds, const FunctionSpec& g) {
    const int64_t n = ds.size();
    if (n < 2)
        throw PreconditionError("k1_score: dataset must have at least 2 rows");

    std::vector<double> h(static_cast<size_t>(n));
    long double hsum = 0.0L;
    for (int64_t i = 0; i < n; ++i) {
        h[static_cast<size_t>(i)] = g(ds.y[static_cast<size_t>(i)]);
        hsum += h[static_cast<size_t>(i)];
    }
    const double hmean = static_cast<double>(hsum / n);
    long double h2 = 0.0L;
    for (auto& v : h) {
        v -= hmean;
        h2 += static_cast<long double>(v) * v;
    }
    if (!(static_cast<double>(h2) > 0.0))
        throw DegeneracyError("k1_score: g(y) has zero variance on this dataset");

    auto eval = [&](int64_t lo, int64_t hi) {
        long double shx = 0.0L, shh = 0.0L, sxx = 0.0L;
        for (int64_t i = lo; i < hi; ++i) {
            const double hi_v = h[static_cast<size_t>(i)];
            const double xi = ds.x[static_cast<size_t>(i)];
            shx += static_cast<long double>(hi_v) * xi;
            shh += static_cast<long double>(hi_v) * hi_v;
            sxx += static_cast<long double>(xi) * xi;
        }
        const long double m = hi - lo;
        const long double num = (shx / m) * (shx / m);
        const long double den = (shh / m) * (sxx / m);
        return den > 0.0L ? static_cast<double>(num / den) : 0.0;
    };
    return batch_score(n, 32, eval);
}

MomentEstimate k2_score(const ChainDataset& ds, std::span<const double> w_prime,
                        const FunctionSpec& g, double alpha) {
    const int64_t n = ds.size();
    if (n < 2)
        throw PreconditionError("k2_score: dataset must have at least 2 rows");
    if (static_cast<int64_t>(w_prime.size()) != n)
        throw PreconditionError("k2_score: w' column length mismatch");

    std::vector<double> gax(static_cast<size_t>(n)); // g(alpha x)
    std::vector<double> gzt(static_cast<size_t>(n)); // g(x + w')
    for (int64_t i = 0; i < n; ++i) {
        gax[static_cast<size_t>(i)] = g(alpha * ds.x[static_cast<size_t>(i)]);
        gzt[static_cast<size_t>(i)] =
            g(ds.x[static_cast<size_t>(i)] + w_prime[static_cast<size_t>(i)]);
    }

    const MomentEstimate den = estimate_moment(
        {{std::span<const double>(gzt), nullptr}, {std::span<const double>(gax), nullptr}});
    if (den.value == 0.0 || std::fabs(den.value) < 10.0 * den.se)
        throw DegeneracyError("k2_score: denominator " + std::to_string(den.value) +
                              " is within 10 standard errors of zero; score unstable");

    auto eval = [&](int64_t lo, int64_t hi) {
        long double snum = 0.0L, sden = 0.0L;
        for (int64_t i = lo; i < hi; ++i) {
            snum += static_cast<long double>(ds.y[static_cast<size_t>(i)]) * gax[static_cast<size_t>(i)];
            sden += static_cast<long double>(gzt[static_cast<size_t>(i)]) * gax[static_cast<size_t>(i)];
        }
        const long double m = hi - lo;
        const long double num_mean = snum / m;
        const long double den_mean = sden / m;
        return static_cast<double>(num_mean * num_mean / den_mean);
    };
    return batch_score(n, 32, eval);
}

namespace {

IdentResult assemble_forward(std::vector<double> c_normbasis, std::vector<double> se_normbasis,
                             double sigma_z, double rho) {
    const int order = static_cast<int>(c_normbasis.size()) - 1;

    long double norm2 = 0.0L;
    long double score = 0.0L;
    long double rpow = 1.0L;
    for (int n = 0; n <= order; ++n) {
        const long double c = c_normbasis[static_cast<size_t>(n)];
        norm2 += c * c;
        score += c * c * rpow;
        rpow *= rho;
    }
    if (!(static_cast<double>(norm2) > 0.0))
        throw DegeneracyError("identify_forward: all coefficient estimates vanish");
    const double norm = std::sqrt(static_cast<double>(norm2));

    IdentResult res;
    res.basis = "hermite";
    res.sigma = sigma_z;
    res.order = order;
    res.scale_c = norm;
    res.score = static_cast<double>(score);
    res.coeffs.resize(static_cast<size_t>(order) + 1);
    res.stderrs.resize(static_cast<size_t>(order) + 1);
    long double fact = 1.0L;
    for (int n = 0; n <= order; ++n) {
        if (n > 0) fact *= static_cast<long double>(n);
        const double root = std::sqrt(static_cast<double>(fact));
        res.coeffs[static_cast<size_t>(n)] = c_normbasis[static_cast<size_t>(n)] / norm * root;
        res.stderrs[static_cast<size_t>(n)] = se_normbasis[static_cast<size_t>(n)] / norm * root;
    }
    return res;
}

} // namespace

IdentResult identify_forward(const ChainDataset& ds, int order) {
    const int64_t n = ds.size();
    if (n < 2)
        throw PreconditionError("identify_forward: dataset must have at least 2 rows");
    const double alpha = alpha_from_snr(ds.config.sigma_x2, ds.config.sigma_w2);
    const double rho = 1.0 / alpha;
    const double sigma_z = std::sqrt(ds.config.sigma_z2());

    if (order < 0)
        order = std::max(1, static_cast<int>(std::floor(std::log(kDefaultOrderFloor) / std::log(rho))));

    // raw_n = mean(y He_n(alpha x / sigma_z)/sqrt(n!)) estimates a_n rho^n / sqrt(n!).
    std::vector<long double> sum(static_cast<size_t>(order) + 1, 0.0L);
    std::vector<long double> sumsq(static_cast<size_t>(order) + 1, 0.0L);
    for (int64_t i = 0; i < n; ++i) {
        const double u = alpha * ds.x[static_cast<size_t>(i)] / sigma_z;
        const std::vector<double> row = hermite_normalized_row(order, u);
        const double yi = ds.y[static_cast<size_t>(i)];
        for (int k = 0; k <= order; ++k) {
            const double v = yi * row[static_cast<size_t>(k)];
            sum[static_cast<size_t>(k)] += v;
            sumsq[static_cast<size_t>(k)] += static_cast<long double>(v) * v;
        }
    }

    std::vector<double> c(static_cast<size_t>(order) + 1);
    std::vector<double> se(static_cast<size_t>(order) + 1);
    double rpow = 1.0;
    for (int k = 0; k <= order; ++k) {
        const long double mean = sum[static_cast<size_t>(k)] / n;
        long double var = (sumsq[static_cast<size_t>(k)] - n * mean * mean) / (n - 1);
        if (var < 0.0L) var = 0.0L;
        const double se_mean =
            static_cast<double>(std::sqrt(static_cast<double>(var / n)));
        c[static_cast<size_t>(k)] = static_cast<double>(mean) / rpow;
        se[static_cast<size_t>(k)] = se_mean / rpow;
        rpow *= rho;
    }

    IdentResult res = assemble_forward(c, se, sigma_z, rho);

    // The estimator divides by rho^n, so high orders amplify noise; refuse
    // orders whose noise floor swamps the whole coefficient vector.
    const double top_noise = 10.0 * se[static_cast<size_t>(order)];
    if (top_noise > res.scale_c)
        throw DegeneracyError(
            "identify_forward: order " + std::to_string(order) +
            " is above the noise floor (10*SE of the top coefficient exceeds the vector "
            "norm); use a smaller order or more samples");
    for (int k = 0; k <= order; ++k)
        if (std::fabs(c[static_cast<size_t>(k)]) < 10.0 * se[static_cast<size_t>(k)] &&
            se[static_cast<size_t>(k)] > 0.0)
            res.diagnostics.push_back("coefficient " + std::to_string(k) +
                                      " is below its 10*SE noise floor");
    return res;
}

IdentResult identify_forward_oracle(const FunctionSpec& f, double sigma_x2, double sigma_w2,
                                    int order, int nodes) {
    if (order < 0)
        throw PreconditionError("identify_forward_oracle: order must be >= 0");
    const double alpha = alpha_from_snr(sigma_x2, sigma_w2);
    const double rho = 1.0 / alpha;
    const double sigma_z = std::sqrt(sigma_x2 + sigma_w2);
    const GaussianPairParams pair(sigma_z, rho);

    std::vector<double> c(static_cast<size_t>(order) + 1);
    std::vector<double> se(static_cast<size_t>(order) + 1, 0.0);
    long double fact = 1.0L;
    double rpow = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) fact *= static_cast<long double>(k);
        // He_k(x / sigma_z) as a plain polynomial in x.
        const std::vector<double> he = hermite_monomial_coeffs(k);
        std::vector<double> poly(he.size());
        double s = 1.0;
        for (size_t d = 0; d < he.size(); ++d) {
            poly[d] = he[d] / s;
            s *= sigma_z;
        }
        const double moment =
            cross_moment_quadrature(f, FunctionSpec::poly(poly), pair, nodes);
        c[static_cast<size_t>(k)] =
            moment / rpow / std::sqrt(static_cast<double>(fact));
        rpow *= rho;
    }
    return assemble_forward(c, se, sigma_z, rho);
}

IdentResult identify_inverse(const ChainDataset& ds, int degree) {
    const int64_t n = ds.size();
    if (n < 2)
        throw PreconditionError("identify_inverse: dataset must have at least 2 rows");
    if (degree < 1)
        throw PreconditionError("identify_inverse: degree must be >= 1");
    const size_t d = static_cast<size_t>(degree);

    // Work in standardized yh = (y - mean)/std so the monomial columns are
    // comparable; the condition check then measures genuine collinearity
    // instead of raw power-scale disparity.
    const double y_mean = ds.y_stats.mean;
    const double y_std = std::sqrt(ds.y_stats.var);
    if (!(y_std > 0.0))
        throw DegeneracyError("identify_inverse: y column has zero variance");

    std::vector<long double> col_mean(d, 0.0L);
    std::vector<double> yh(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) {
        yh[static_cast<size_t>(i)] = (ds.y[static_cast<size_t>(i)] - y_mean) / y_std;
        double p = 1.0;
        for (size_t k = 0; k < d; ++k) {
            p *= yh[static_cast<size_t>(i)];
            col_mean[k] += p;
        }
    }
    for (auto& m : col_mean) m /= n;

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(degree, degree);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(degree);
    long double sxx = 0.0L;
    std::vector<double> phi(d);
    for (int64_t i = 0; i < n; ++i) {
        double p = 1.0;
        for (size_t k = 0; k < d; ++k) {
            p *= yh[static_cast<size_t>(i)];
            phi[k] = p - static_cast<double>(col_mean[k]);
        }
        const double xi = ds.x[static_cast<size_t>(i)];
        sxx += static_cast<long double>(xi) * xi;
        for (size_t a = 0; a < d; ++a) {
            u[static_cast<Eigen::Index>(a)] += phi[a] * xi;
            for (size_t b = a; b < d; ++b)
                M(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += phi[a] * phi[b];
        }
    }
    M /= static_cast<double>(n);
    u /= static_cast<double>(n);
    const double x2 = static_cast<double>(sxx / n);
    for (int a = 0; a < degree; ++a)
        for (int b = a + 1; b < degree; ++b)
            M(b, a) = M(a, b);

    // Equilibrate to unit diagonal before assessing the condition number.
    Eigen::VectorXd scale(degree);
    for (int k = 0; k < degree; ++k) {
        const double diag = M(k, k);
        if (!(diag > 0.0))
            throw DegeneracyError("identify_inverse: basis column " + std::to_string(k + 1) +
                                  " is degenerate; use a smaller basis degree");
        scale[k] = std::sqrt(diag);
    }
    Eigen::MatrixXd Mt(degree, degree);
    for (int a = 0; a < degree; ++a)
        for (int bidx = 0; bidx < degree; ++bidx)
            Mt(a, bidx) = M(a, bidx) / (scale[a] * scale[bidx]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Mt);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (!(lmin > 0.0) || lmax / lmin > kMaxCondition)
        throw DegeneracyError("identify_inverse: moment matrix condition number exceeds 1e10; "
                              "use a smaller basis degree");

    const double ridge = kRidgeScale * Mt.trace() / degree;
    const Eigen::MatrixXd Mr = Mt + ridge * Eigen::MatrixXd::Identity(degree, degree);
    Eigen::VectorXd ut(degree);
    for (int k = 0; k < degree; ++k) ut[k] = u[k] / scale[k];
    const Eigen::VectorXd bt = Mr.llt().solve(ut);
    Eigen::VectorXd b(degree);
    for (int k = 0; k < degree; ++k) b[k] = bt[k] / scale[k];

    const double num = b.dot(u);
    const double quad = b.dot(M * b);
    if (!(quad > 0.0))
        throw DegeneracyError("identify_inverse: degenerate optimum");
    const double k1 = num * num / quad / x2;

    // Expand g(y) = sum_k b_k ((y - mean)/std)^k - shift into plain monomials.
    std::vector<double> folded(d + 1, 0.0);
    {
        std::vector<double> power = {1.0}; // ((y - mean)/std)^k as raw coefficients
        double shift = 0.0;
        for (size_t k = 0; k < d; ++k) {
            // power *= (y - mean)/std
            std::vector<double> next(power.size() + 1, 0.0);
            for (size_t j = 0; j < power.size(); ++j) {
                next[j + 1] += power[j] / y_std;
                next[j] += power[j] * (-y_mean / y_std);
            }
            power = std::move(next);
            const double bk = b[static_cast<Eigen::Index>(k)];
            for (size_t j = 0; j < power.size(); ++j) folded[j] += bk * power[j];
            shift += bk * static_cast<double>(col_mean[k]);
        }
        folded[0] -= shift;
    }

    double norm = 0.0;
    for (double v : folded) norm += v * v;
    norm = std::sqrt(norm);
    if (!(norm > 0.0))
        throw DegeneracyError("identify_inverse: zero solution");

    IdentResult res;
    res.basis = "monomial";
    res.sigma = std::sqrt(ds.config.sigma_z2());
    res.order = degree;
    res.scale_c = norm;
    res.score = k1;
    res.coeffs.resize(folded.size());
    for (size_t k = 0; k < folded.size(); ++k) res.coeffs[k] = folded[k] / norm;
    res.stderrs.assign(folded.size(), 0.0);
    res.zhat.resize(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t k = folded.size(); k-- > 0;)
            acc = acc * ds.y[static_cast<size_t>(i)] + folded[k];
        res.zhat[static_cast<size_t>(i)] = acc;
    }
    const double cond = lmax / std::max(lmin, 1e-300);
    res.diagnostics.push_back("moment matrix condition number " + std::to_string(cond));
    if (k1 < 0.8 * ds.config.sigma_x2 / ds.config.sigma_z2())
        res.diagnostics.push_back(
            "K1 optimum is far below the invertible-chain ceiling sigma_x2/sigma_z2; "
            "f may not be invertible on the observed range");
    return res;
}

double recover_scale(const IdentResult& result, const ChainDataset& ds,
                     std::span<const double> w_prime) {
    const int64_t n = ds.size();
    if (static_cast<int64_t>(w_prime.size()) != n)
        throw PreconditionError("recover_scale: w' column length mismatch");
    if (result.basis != "hermite")
        throw PreconditionError("recover_scale: a hermite-basis result is required");

    long double y2 = 0.0L;
    for (double v : ds.y) y2 += static_cast<long double>(v) * v;
    if (!(static_cast<double>(y2) > 0.0))
        throw DegeneracyError("recover_scale: y column is identically zero");

    const HermiteSeries fhat = result.series();
    if (!(fhat.weighted_norm() > 0.0))
        throw DegeneracyError("recover_scale: estimated series has zero energy");

    const double alpha = alpha_from_snr(ds.config.sigma_x2, ds.config.sigma_w2);
    long double num = 0.0L, den = 0.0L;
    for (int64_t i = 0; i < n; ++i) {
        const double fax = reconstruct(fhat, alpha * ds.x[static_cast<size_t>(i)]);
        const double fzt = reconstruct(
            fhat, ds.x[static_cast<size_t>(i)] + w_prime[static_cast<size_t>(i)]);
        num += static_cast<long double>(ds.y[static_cast<size_t>(i)]) * fax;
        den += static_cast<long double>(fzt) * fax;
    }
    if (den == 0.0L)
        throw DegeneracyError("recover_scale: denominator vanishes");
    return static_cast<double>(num / den);
}

} // namespace xmom
