#ifndef XMOM_IDENT_HPP
#define XMOM_IDENT_HPP

#include <span>
#include <string>
#include <vector>

#include "xmom/function_spec.hpp"
#include "xmom/hermite.hpp"
#include "xmom/simulate.hpp"

namespace xmom {

/// Gain matching the variance of the scaled clean signal to the noisy one:
/// alpha = sqrt((sigma_x2 + sigma_w2) / sigma_x2). sigma_w2 = 0 is permitted
/// (noiseless limit, alpha = 1); nonpositive sigma_x2 or negative sigma_w2
/// is rejected.
double alpha_from_snr(double sigma_x2, double sigma_w2);

/// K1 = E^2[h(z) x] / (E[h^2(z)] E[x^2]) with h = g(y) mean-centered.
/// Standard error via batch means.
MomentEstimate k1_score(const ChainDataset& ds, const FunctionSpec& g);

/// K2 = E^2[y g(alpha x)] / E[g(x + w') g(alpha x)]. The denominator uses the
/// synthetic-noise substitution; it must be bounded away from zero
/// (|den| >= 10 SE(den)).
MomentEstimate k2_score(const ChainDataset& ds, std::span<const double> w_prime,
                        const FunctionSpec& g, double alpha);

/// Identification output. `basis` is "hermite" (forward path: coeffs are a
/// HermiteSeries over sigma) or "monomial" (inverse path: coeffs are
/// polynomial coefficients in y). Coefficients are normalized - forward so
/// that sum a_n^2/n! = 1, inverse to unit Euclidean norm - with the removed
/// magnitude in scale_c.
struct IdentResult {
    std::string basis = "hermite";
    double sigma = 1.0;
    std::vector<double> coeffs;
    std::vector<double> stderrs;
    double scale_c = 0.0;
    double score = 0.0;
    int order = 0;
    std::vector<std::string> diagnostics;
    std::vector<double> zhat; // inverse path only: the composed g(y) column

    HermiteSeries series() const { return HermiteSeries{sigma, coeffs}; }
};

/// Estimate the Hermite coefficients of f at sigma_z from the chain data:
/// a_n = mean(y_t He_n(alpha x_t / sigma_z)) / rho^n with rho = 1/alpha.
/// order < 0 selects the default order (largest n with rho^n >= 1e-3).
IdentResult identify_forward(const ChainDataset& ds, int order = -1);

/// Infinite-data variant: time averages replaced by 2-D quadrature of
/// E[f(Z1) He_n(Z2/sigma_z)] over the (sigma_z, 1/alpha) pair.
IdentResult identify_forward_oracle(const FunctionSpec& f, double sigma_x2, double sigma_w2,
                                    int order, int nodes = 128);

/// Invertible-f path: parametrize g(y) as a mean-centered monomial basis up
/// to `degree` and maximize the K1 Rayleigh quotient in closed form.
IdentResult identify_inverse(const ChainDataset& ds, int degree);

/// Multiplicative constant c such that y ~ c * fhat: ratio of the observable
/// moments mean(y fhat(alpha x)) / mean(fhat(x + w') fhat(alpha x)), both
/// estimable thanks to the synthetic-noise substitution.
double recover_scale(const IdentResult& result, const ChainDataset& ds,
                     std::span<const double> w_prime);

} // namespace xmom

#endif
