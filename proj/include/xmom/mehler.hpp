#ifndef XMOM_MEHLER_HPP
#define XMOM_MEHLER_HPP

#include "xmom/function_spec.hpp"
#include "xmom/hermite.hpp"

namespace xmom {

/// Parameters of a symmetric zero-mean bivariate normal pair: both marginals
/// N(0, sigma^2) with correlation rho, |rho| < 1 strictly.
struct GaussianPairParams {
    double sigma = 1.0;
    double rho = 0.0;

    GaussianPairParams(double sigma_, double rho_);
};

enum class DensityMode { ClosedForm, Series };

/// Joint density of the pair at (z1, z2). ClosedForm evaluates the usual
/// bivariate normal formula; Series evaluates the product-Gaussian factor
/// times the Hermite kernel sum truncated at order N.
double density(double z1, double z2, const GaussianPairParams& p, DensityMode mode,
               int series_order = 40);

/// E[g1(Z1) g2(Z2)] from two Hermite series over the same sigma:
/// sum_n a1_n a2_n rho^n / n!, truncated at min(order1, order2), with early
/// termination once terms fall below 1e-16 of the partial sum.
double cross_moment(const HermiteSeries& s1, const HermiteSeries& s2, double rho);

/// Independent oracle: E[g1(Z1) g2(Z2)] by quadrature over independent
/// standardized variables (U, V) with Z1 = sigma U and
/// Z2 = sigma (rho U + sqrt(1-rho^2) V). The inner V-rule is re-aligned to
/// g2's breakpoints per outer node, so discontinuous corpus functions are
/// integrated to near machine precision.
double cross_moment_quadrature(const FunctionSpec& g1, const FunctionSpec& g2,
                               const GaussianPairParams& p, int nodes = 128);

/// E[g(Z)^2] for Z ~ N(0, sigma^2), by 1-D quadrature.
double second_moment_quadrature(const FunctionSpec& g, double sigma, int nodes = 128);

/// E[g(Z)] for Z ~ N(0, sigma^2), by 1-D quadrature.
double mean_quadrature(const FunctionSpec& g, double sigma, int nodes = 128);

} // namespace xmom

#endif
