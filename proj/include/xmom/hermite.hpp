#ifndef XMOM_HERMITE_HPP
#define XMOM_HERMITE_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "xmom/function_spec.hpp"

namespace xmom {

/// He_n(x), probabilists' convention, via the three-term recurrence
/// He_{n+1}(x) = x He_n(x) - n He_{n-1}(x), He_0 = 1, He_1 = x.
double hermite_eval(int n, double x);

/// Row of He_n(x)/sqrt(n!) for n = 0..nmax; numerically stable for large n.
std::vector<double> hermite_normalized_row(int nmax, double x);

/// Monomial coefficients of He_n: c[0] + c[1] x + ... + c[n] x^n.
std::vector<double> hermite_monomial_coeffs(int n);

/// Nodes and weights for integration against the standard normal density.
/// Weights sum to 1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    size_t size() const { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const {
        long double acc = 0.0L;
        for (size_t i = 0; i < nodes.size(); ++i)
            acc += static_cast<long double>(weights[i]) * f(nodes[i]);
        return static_cast<double>(acc);
    }
};

/// Gauss-Hermite rule with m nodes: exact for polynomial degree <= 2m-1
/// under the standard normal weight. Nodes strictly increasing, symmetric
/// about 0; weights strictly positive.
QuadratureRule gauss_hermite_rule(int m);

/// Cached variant; rules are immutable so sharing is safe across threads.
const QuadratureRule& cached_gauss_hermite(int m);

/// Composite Gauss-Legendre rule on [-L, L] against the standard normal
/// density, with panel edges placed on the given breakpoints so that
/// piecewise-smooth integrands are integrated panel-by-panel on smooth
/// pieces. `target_nodes` controls the total node budget.
QuadratureRule composite_gaussian_rule(const std::vector<double>& breakpoints,
                                       int target_nodes = 512,
                                       int nodes_per_panel = 16,
                                       double domain_halfwidth = 12.0);

/// Rule appropriate for integrating g(sigma * u) against the standard normal
/// density in u: plain Gauss-Hermite for smooth g, breakpoint-aligned
/// composite otherwise.
QuadratureRule rule_for(const FunctionSpec& g, double sigma, int smooth_nodes = 128,
                        int composite_nodes = 512);

/// Truncated coefficient vector a_n = E[g(Z) He_n(Z/sigma)], Z ~ N(0, sigma^2).
struct HermiteSeries {
    double sigma = 1.0;
    std::vector<double> coeffs; // a_0 .. a_N

    int order() const { return static_cast<int>(coeffs.size()) - 1; }

    /// sqrt(sum a_n^2 / n!): the norm induced by the weighted inner product.
    double weighted_norm() const;
};

/// Project g onto the scaled Hermite basis: coeffs[n] ~ E[g(Z) He_n(Z/sigma)].
/// Throws DegeneracyError naming the offending order if a coefficient is
/// non-finite (g grows too fast for the rule).
HermiteSeries project(const FunctionSpec& g, double sigma, int order,
                      const QuadratureRule& rule);

/// As above with the default rule choice: Gauss-Hermite m=128 for smooth g,
/// breakpoint-aligned composite with ~512 nodes otherwise.
HermiteSeries project(const FunctionSpec& g, double sigma, int order = 32);

/// Evaluate the truncated series sum_n a_n He_n(x/sigma) / n!.
double reconstruct(const HermiteSeries& s, double x);

} // namespace xmom

#endif
