#include "xmom/mehler.hpp"

#include <cmath>
#include <numbers>

#include "xmom/errors.hpp"

namespace xmom {

GaussianPairParams::GaussianPairParams(double sigma_, double rho_) : sigma(sigma_), rho(rho_) {
    if (!(sigma > 0.0))
        throw PreconditionError("pair params: sigma must be > 0");
    if (!(std::fabs(rho) < 1.0))
        throw PreconditionError("pair params: rho must satisfy |rho| < 1");
}

double density(double z1, double z2, const GaussianPairParams& p, DensityMode mode,
               int series_order) {
    const double s2 = p.sigma * p.sigma;
    if (mode == DensityMode::ClosedForm) {
        const double q = 1.0 - p.rho * p.rho;
        // Grouped so the expression is bitwise symmetric in (z1, z2).
        const double quad = (z1 * z1 + z2 * z2) - 2.0 * p.rho * (z1 * z2);
        return std::exp(-0.5 * quad / (s2 * q)) / (2.0 * std::numbers::pi * s2 * std::sqrt(q));
    }
    if (series_order < 0)
        throw PreconditionError("density: series order must be >= 0");
    const double u1 = z1 / p.sigma;
    const double u2 = z2 / p.sigma;
    const std::vector<double> h1 = hermite_normalized_row(series_order, u1);
    const std::vector<double> h2 = hermite_normalized_row(series_order, u2);
    long double kernel = 0.0L;
    long double rpow = 1.0L;
    for (int n = 0; n <= series_order; ++n) {
        kernel += static_cast<long double>(h1[static_cast<size_t>(n)]) *
                  h2[static_cast<size_t>(n)] * rpow;
        rpow *= p.rho;
    }
    const double prefactor =
        std::exp(-0.5 * (u1 * u1 + u2 * u2)) / (2.0 * std::numbers::pi * s2);
    return prefactor * static_cast<double>(kernel);
}

double cross_moment(const HermiteSeries& s1, const HermiteSeries& s2, double rho) {
    if (s1.sigma != s2.sigma)
        throw PreconditionError("cross_moment: series sigmas must match");
    if (!(std::fabs(rho) < 1.0))
        throw PreconditionError("cross_moment: rho must satisfy |rho| < 1");

    const int order = std::min(s1.order(), s2.order());
    long double acc = 0.0L;
    long double fact = 1.0L;
    long double rpow = 1.0L;
    int tiny_streak = 0;
    for (int n = 0; n <= order; ++n) {
        if (n > 0) {
            fact *= static_cast<long double>(n);
            rpow *= rho;
        }
        const long double term = static_cast<long double>(s1.coeffs[static_cast<size_t>(n)]) *
                                 s2.coeffs[static_cast<size_t>(n)] * rpow / fact;
        acc += term;
        // Parity-sparse series interleave exact zeros with live terms, so a
        // single small term must not stop the sum.
        if (std::fabs(static_cast<double>(term)) <
            1e-16 * std::fabs(static_cast<double>(acc)))
            ++tiny_streak;
        else
            tiny_streak = 0;
        if (tiny_streak >= 3) break;
    }
    return static_cast<double>(acc);
}

namespace {

QuadratureRule inner_rule(const FunctionSpec& g2, double sigma, double rho, double u, int nodes) {
    const std::vector<double> breaks = g2.breakpoints();
    if (breaks.empty())
        return {};
    const double s = std::sqrt(1.0 - rho * rho);
    std::vector<double> transformed;
    transformed.reserve(breaks.size());
    for (double b : breaks)
        transformed.push_back((b / sigma - rho * u) / s);
    return composite_gaussian_rule(transformed, std::max(nodes, 384));
}

} // namespace

double cross_moment_quadrature(const FunctionSpec& g1, const FunctionSpec& g2,
                               const GaussianPairParams& p, int nodes) {
    if (nodes < 1)
        throw PreconditionError("cross_moment_quadrature: node count must be >= 1");

    const double rho = p.rho;
    const double sigma = p.sigma;
    const double s = std::sqrt(1.0 - rho * rho);

    const QuadratureRule outer = g1.smooth() ? cached_gauss_hermite(nodes)
                                             : rule_for(g1, sigma, nodes, std::max(nodes, 384));
    const bool inner_fixed = g2.smooth();
    const QuadratureRule fixed = inner_fixed ? cached_gauss_hermite(nodes) : QuadratureRule{};

    long double acc = 0.0L;
    for (size_t i = 0; i < outer.size(); ++i) {
        const double u = outer.nodes[i];
        const QuadratureRule local = inner_fixed ? QuadratureRule{} : inner_rule(g2, sigma, rho, u, nodes);
        const QuadratureRule& inner = inner_fixed ? fixed : local;
        long double inner_acc = 0.0L;
        for (size_t j = 0; j < inner.size(); ++j)
            inner_acc += static_cast<long double>(inner.weights[j]) *
                         g2(sigma * (rho * u + s * inner.nodes[j]));
        acc += static_cast<long double>(outer.weights[i]) * g1(sigma * u) * inner_acc;
    }
    return static_cast<double>(acc);
}

double second_moment_quadrature(const FunctionSpec& g, double sigma, int nodes) {
    const QuadratureRule rule = rule_for(g, sigma, nodes, std::max(nodes, 384));
    return rule.integrate([&](double u) {
        const double v = g(sigma * u);
        return v * v;
    });
}

double mean_quadrature(const FunctionSpec& g, double sigma, int nodes) {
    const QuadratureRule rule = rule_for(g, sigma, nodes, std::max(nodes, 384));
    return rule.integrate([&](double u) { return g(sigma * u); });
}

} // namespace xmom
