#ifndef XMOM_INEQUALITY_HPP
#define XMOM_INEQUALITY_HPP

#include <cstdint>
#include <string>

#include "xmom/function_spec.hpp"
#include "xmom/hermite.hpp"
#include "xmom/mehler.hpp"

namespace xmom {

enum class Engine { Series, Quadrature, MonteCarlo };

enum class Parity { Even, Odd, Neither };

const char* engine_name(Engine e);
const char* parity_name(Parity p);

struct EngineOptions {
    int series_order = 40;
    int quad_nodes = 128;
    int64_t mc_samples = 1'000'000;
    uint64_t mc_seed = 20240901;
};

/// One verdict for E^2[g1(Z1)g2(Z2)] <= E[g1(Z1)g1(Z2)] E[g2(Z1)g2(Z2)].
struct CorrelationReport {
    double lhs = 0.0;      // E^2[g1(Z1) g2(Z2)]
    double rhs = 0.0;      // product of the two auto cross-moments
    double slack = 0.0;    // rhs - lhs
    bool equality = false;
    Engine engine = Engine::Series;
    double tolerance = 0.0;
    std::string route = "lemma1"; // lemma1 | corollary | lemma2
    // Diagnostics: the three first-order moments and the Monte Carlo
    // standard error of the slack (0 for deterministic engines).
    double cross = 0.0;
    double auto1 = 0.0;
    double auto2 = 0.0;
    double slack_stderr = 0.0;
};

/// Check the inequality for a positively correlated pair. Requires rho > 0;
/// use corollary_check for rho < 0.
CorrelationReport lemma1_check(const FunctionSpec& g1, const FunctionSpec& g2,
                               const GaussianPairParams& p, Engine engine,
                               const EngineOptions& opts = {});

/// Even/odd extension: for rho < 0 applies the lemma to (Z1, -Z2) by
/// reflecting g2; for rho > 0 delegates to lemma1_check. Both functions must
/// share a parity class, and rho must be nonzero.
CorrelationReport corollary_check(const FunctionSpec& g1, const FunctionSpec& g2,
                                  const GaussianPairParams& p, Engine engine = Engine::Series,
                                  const EngineOptions& opts = {});

/// Grid-based parity classification on 257 symmetric points in
/// [-5 sigma, 5 sigma], relative tolerance 1e-9.
Parity parity_of(const FunctionSpec& g, double sigma = 1.0);

/// Maximal-correlation upper bound rho^2 E[g1^2(Z)] E[g2^2(Z)] for odd g1, g2.
double maxcorr_bound(const FunctionSpec& g1, const FunctionSpec& g2,
                     const GaussianPairParams& p, int nodes = 128);

/// Cauchy-Schwarz equality test at truncation order: are the rho-weighted
/// vectors (a_n rho^{n/2} / sqrt(n!)) proportional within rel_tol?
bool series_proportional(const HermiteSeries& s1, const HermiteSeries& s2, double rho,
                         double rel_tol = 1e-8);

/// Engine-specific equality tolerance: 1e-10 (series), 1e-8 (quadrature);
/// Monte Carlo uses 3x the estimated slack standard error instead.
double equality_tolerance(Engine e);

/// Assemble a report from two projected series; the three weighted sums and
/// the slack subtraction are carried in extended precision so proportional
/// pairs report |slack| well below the series equality tolerance.
CorrelationReport report_from_series(const HermiteSeries& s1, const HermiteSeries& s2,
                                     double rho);

/// Assemble a report from precomputed first-order moments (quadrature or any
/// external engine producing E[g1 g2], E[g1 g1], E[g2 g2]).
CorrelationReport report_from_moments(double cross, double auto1, double auto2, Engine engine);

} // namespace xmom

#endif
