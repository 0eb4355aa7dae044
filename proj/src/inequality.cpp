#include "xmom/inequality.hpp"

#include <array>
#include <cmath>

#include "xmom/errors.hpp"
#include "xmom/simulate.hpp"

namespace xmom {

const char* engine_name(Engine e) {
    switch (e) {
    case Engine::Series: return "series";
    case Engine::Quadrature: return "quadrature";
    case Engine::MonteCarlo: return "montecarlo";
    }
    return "?";
}

const char* parity_name(Parity p) {
    switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::Neither: return "neither";
    }
    return "?";
}

double equality_tolerance(Engine e) {
    switch (e) {
    case Engine::Series: return 1e-10;
    case Engine::Quadrature: return 1e-8;
    case Engine::MonteCarlo: return 0.0; // 3x slack SE, filled per report
    }
    return 0.0;
}

namespace {

// Weighted series sum in extended precision; the slack rhs - lhs cancels
// almost completely for proportional functions, so the three sums and the
// final products stay in long double until the report is assembled.
long double cross_moment_ld(const HermiteSeries& s1, const HermiteSeries& s2, double rho) {
    const int order = std::min(s1.order(), s2.order());
    long double acc = 0.0L;
    long double fact = 1.0L;
    long double rpow = 1.0L;
    for (int n = 0; n <= order; ++n) {
        if (n > 0) {
            fact *= static_cast<long double>(n);
            rpow *= rho;
        }
        acc += static_cast<long double>(s1.coeffs[static_cast<size_t>(n)]) *
               s2.coeffs[static_cast<size_t>(n)] * rpow / fact;
    }
    return acc;
}

CorrelationReport finish_report(long double cross, long double auto1, long double auto2,
                                Engine engine, double tolerance, double slack_se) {
    CorrelationReport r;
    r.cross = static_cast<double>(cross);
    r.auto1 = static_cast<double>(auto1);
    r.auto2 = static_cast<double>(auto2);
    const long double lhs = cross * cross;
    const long double rhs = auto1 * auto2;
    r.lhs = static_cast<double>(lhs);
    r.rhs = static_cast<double>(rhs);
    r.slack = static_cast<double>(rhs - lhs);
    r.engine = engine;
    r.tolerance = tolerance;
    r.slack_stderr = slack_se;
    r.equality = std::fabs(r.slack) <= tolerance;
    return r;
}

CorrelationReport lemma1_series(const FunctionSpec& g1, const FunctionSpec& g2,
                                const GaussianPairParams& p, const EngineOptions& opts) {
    const HermiteSeries s1 = project(g1, p.sigma, opts.series_order);
    const HermiteSeries s2 = project(g2, p.sigma, opts.series_order);
    return report_from_series(s1, s2, p.rho);
}

CorrelationReport lemma1_quadrature(const FunctionSpec& g1, const FunctionSpec& g2,
                                    const GaussianPairParams& p, const EngineOptions& opts) {
    const double cross = cross_moment_quadrature(g1, g2, p, opts.quad_nodes);
    const double auto1 = cross_moment_quadrature(g1, g1, p, opts.quad_nodes);
    const double auto2 = cross_moment_quadrature(g2, g2, p, opts.quad_nodes);
    return report_from_moments(cross, auto1, auto2, Engine::Quadrature);
}

CorrelationReport lemma1_montecarlo(const FunctionSpec& g1, const FunctionSpec& g2,
                                    const GaussianPairParams& p, const EngineOptions& opts) {
    const int64_t n = opts.mc_samples;
    if (n < 2)
        throw PreconditionError("montecarlo engine: need at least 2 samples");
    const PairSample pairs = sample_bivariate(p, n, opts.mc_seed);

    // Per-sample products (g1g1, g2g2, g1g2): means plus covariance for the
    // delta-method slack standard error.
    std::array<long double, 3> sum = {0.0L, 0.0L, 0.0L};
    std::array<std::array<long double, 3>, 3> sumsq = {};
    for (int64_t i = 0; i < n; ++i) {
        const double a1 = g1(pairs.z1[static_cast<size_t>(i)]);
        const double a2 = g1(pairs.z2[static_cast<size_t>(i)]);
        const double b1 = g2(pairs.z1[static_cast<size_t>(i)]);
        const double b2 = g2(pairs.z2[static_cast<size_t>(i)]);
        const std::array<double, 3> v = {a1 * a2, b1 * b2, a1 * b2};
        for (int j = 0; j < 3; ++j) {
            sum[static_cast<size_t>(j)] += v[static_cast<size_t>(j)];
            for (int k = j; k < 3; ++k)
                sumsq[static_cast<size_t>(j)][static_cast<size_t>(k)] +=
                    static_cast<long double>(v[static_cast<size_t>(j)]) * v[static_cast<size_t>(k)];
        }
    }
    std::array<long double, 3> mean;
    for (int j = 0; j < 3; ++j)
        mean[static_cast<size_t>(j)] = sum[static_cast<size_t>(j)] / static_cast<long double>(n);
    std::array<std::array<long double, 3>, 3> cov = {};
    for (int j = 0; j < 3; ++j)
        for (int k = j; k < 3; ++k) {
            const long double c =
                (sumsq[static_cast<size_t>(j)][static_cast<size_t>(k)] -
                 static_cast<long double>(n) * mean[static_cast<size_t>(j)] * mean[static_cast<size_t>(k)]) /
                static_cast<long double>(n - 1);
            cov[static_cast<size_t>(j)][static_cast<size_t>(k)] = c;
            cov[static_cast<size_t>(k)][static_cast<size_t>(j)] = c;
        }

    // slack = m0 m1 - m2^2; grad = (m1, m0, -2 m2)
    const std::array<long double, 3> grad = {mean[1], mean[0], -2.0L * mean[2]};
    long double var_slack = 0.0L;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            var_slack += grad[static_cast<size_t>(j)] * cov[static_cast<size_t>(j)][static_cast<size_t>(k)] *
                         grad[static_cast<size_t>(k)];
    var_slack /= static_cast<long double>(n);
    const double slack_se =
        var_slack > 0.0L ? std::sqrt(static_cast<double>(var_slack)) : 0.0;

    return finish_report(mean[2], mean[0], mean[1], Engine::MonteCarlo, 3.0 * slack_se,
                         slack_se);
}

} // namespace

CorrelationReport report_from_series(const HermiteSeries& s1, const HermiteSeries& s2,
                                     double rho) {
    const long double cross = cross_moment_ld(s1, s2, rho);
    const long double auto1 = cross_moment_ld(s1, s1, rho);
    const long double auto2 = cross_moment_ld(s2, s2, rho);
    return finish_report(cross, auto1, auto2, Engine::Series,
                         equality_tolerance(Engine::Series), 0.0);
}

CorrelationReport report_from_moments(double cross, double auto1, double auto2, Engine engine) {
    return finish_report(cross, auto1, auto2, engine, equality_tolerance(engine), 0.0);
}

CorrelationReport lemma1_check(const FunctionSpec& g1, const FunctionSpec& g2,
                               const GaussianPairParams& p, Engine engine,
                               const EngineOptions& opts) {
    if (!(p.rho > 0.0))
        throw PreconditionError(
            "lemma1_check: rho must be > 0 (use corollary_check for rho < 0)");
    switch (engine) {
    case Engine::Series: return lemma1_series(g1, g2, p, opts);
    case Engine::Quadrature: return lemma1_quadrature(g1, g2, p, opts);
    case Engine::MonteCarlo: return lemma1_montecarlo(g1, g2, p, opts);
    }
    throw PreconditionError("lemma1_check: unknown engine");
}

CorrelationReport corollary_check(const FunctionSpec& g1, const FunctionSpec& g2,
                                  const GaussianPairParams& p, Engine engine,
                                  const EngineOptions& opts) {
    if (p.rho == 0.0)
        throw PreconditionError("corollary_check: rho must be nonzero");
    const Parity p1 = parity_of(g1, p.sigma);
    const Parity p2 = parity_of(g2, p.sigma);
    if (p1 == Parity::Neither)
        throw PreconditionError("corollary_check: " + g1.label() + " is neither even nor odd");
    if (p2 == Parity::Neither)
        throw PreconditionError("corollary_check: " + g2.label() + " is neither even nor odd");
    if (p1 != p2)
        throw PreconditionError("corollary_check: parity mismatch between " + g1.label() +
                                " (" + parity_name(p1) + ") and " + g2.label() + " (" +
                                parity_name(p2) + ")");
    if (p.rho > 0.0)
        return lemma1_check(g1, g2, p, engine, opts);

    // rho < 0: apply the lemma to (Z1, -Z2), i.e. reflect g2's argument.
    const GaussianPairParams flipped(p.sigma, -p.rho);
    CorrelationReport r = lemma1_check(g1, FunctionSpec::reflected(g2), flipped, engine, opts);
    r.route = "corollary";
    return r;
}

Parity parity_of(const FunctionSpec& g, double sigma) {
    constexpr int kPoints = 257;
    const double L = 5.0 * sigma;
    double scale = 0.0;
    double even_dev = 0.0;
    double odd_dev = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        const double x = -L + 2.0 * L * static_cast<double>(i) / (kPoints - 1);
        const double a = g(x);
        const double b = g(-x);
        scale = std::max(scale, std::fabs(a));
        even_dev = std::max(even_dev, std::fabs(a - b));
        odd_dev = std::max(odd_dev, std::fabs(a + b));
    }
    if (scale == 0.0) return Parity::Even; // zero function
    const double tol = 1e-9 * scale;
    if (even_dev <= tol) return Parity::Even;
    if (odd_dev <= tol) return Parity::Odd;
    return Parity::Neither;
}

double maxcorr_bound(const FunctionSpec& g1, const FunctionSpec& g2,
                     const GaussianPairParams& p, int nodes) {
    if (p.rho == 0.0)
        throw PreconditionError("maxcorr_bound: rho must be nonzero");
    if (parity_of(g1, p.sigma) != Parity::Odd)
        throw PreconditionError("maxcorr_bound: " + g1.label() + " must be odd");
    if (parity_of(g2, p.sigma) != Parity::Odd)
        throw PreconditionError("maxcorr_bound: " + g2.label() + " must be odd");
    const double e1 = second_moment_quadrature(g1, p.sigma, nodes);
    const double e2 = second_moment_quadrature(g2, p.sigma, nodes);
    return p.rho * p.rho * e1 * e2;
}

bool series_proportional(const HermiteSeries& s1, const HermiteSeries& s2, double rho,
                         double rel_tol) {
    const int order = std::min(s1.order(), s2.order());
    long double uu = 0.0L, vv = 0.0L, uv = 0.0L;
    long double fact = 1.0L;
    long double rpow = 1.0L;
    const double ar = std::fabs(rho);
    for (int n = 0; n <= order; ++n) {
        if (n > 0) {
            fact *= static_cast<long double>(n);
            rpow *= ar;
        }
        const long double u = static_cast<long double>(s1.coeffs[static_cast<size_t>(n)]);
        const long double v = static_cast<long double>(s2.coeffs[static_cast<size_t>(n)]);
        const long double w = rpow / fact;
        uu += u * u * w;
        vv += v * v * w;
        uv += u * v * w;
    }
    if (uu == 0.0L || vv == 0.0L) return true; // zero function is proportional to anything
    long double sin2 = 1.0L - (uv * uv) / (uu * vv);
    if (sin2 < 0.0L) sin2 = 0.0L;
    return std::sqrt(static_cast<double>(sin2)) <= rel_tol;
}

} // namespace xmom
