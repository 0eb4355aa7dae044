#include "xmom/hermite.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <string>

#include "xmom/errors.hpp"

namespace xmom {

double hermite_eval(int n, double x) {
    if (n < 0)
        throw PreconditionError("hermite_eval: order must be >= 0");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int k = 1; k < n; ++k) {
        const double next = x * cur - static_cast<double>(k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> hermite_normalized_row(int nmax, double x) {
    std::vector<double> row(static_cast<size_t>(nmax) + 1);
    row[0] = 1.0;
    if (nmax >= 1) row[1] = x;
    for (int n = 1; n < nmax; ++n)
        row[n + 1] = (x * row[n] - std::sqrt(static_cast<double>(n)) * row[n - 1]) /
                     std::sqrt(static_cast<double>(n) + 1.0);
    return row;
}

std::vector<double> hermite_monomial_coeffs(int n) {
    if (n < 0)
        throw PreconditionError("hermite_monomial_coeffs: order must be >= 0");
    std::vector<double> prev = {1.0};
    if (n == 0) return prev;
    std::vector<double> cur = {0.0, 1.0};
    for (int k = 1; k < n; ++k) {
        std::vector<double> next(cur.size() + 1, 0.0);
        for (size_t i = 0; i < cur.size(); ++i)
            next[i + 1] += cur[i];
        for (size_t i = 0; i < prev.size(); ++i)
            next[i] -= static_cast<double>(k) * prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

namespace {

// Eigenvalues of the symmetric tridiagonal Jacobi matrix give the node
// estimates; nodes are then Newton-polished and the weights recovered from
// the classical closed forms. (Eigenvector-based weights lose relative
// accuracy exactly where the weights are tiny, which the high-order
// orthogonality checks can see.)
std::vector<double> jacobi_eigenvalues(const Eigen::VectorXd& diag,
                                       const Eigen::VectorXd& subdiag) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, subdiag, Eigen::EigenvaluesOnly);
    std::vector<double> nodes(static_cast<size_t>(diag.size()));
    for (Eigen::Index i = 0; i < diag.size(); ++i)
        nodes[static_cast<size_t>(i)] = solver.eigenvalues()[i];
    return nodes;
}

// Normalized Hermite pair (h_m(x), h_{m-1}(x)), h_n = He_n/sqrt(n!), in
// extended precision so nodes land on correctly rounded doubles.
void hermite_pair(int m, long double x, long double& hm, long double& hm1) {
    long double prev = 1.0L;
    long double cur = x;
    if (m == 1) {
        hm = cur;
        hm1 = prev;
        return;
    }
    for (int n = 1; n < m; ++n) {
        const long double next =
            (x * cur - std::sqrt(static_cast<long double>(n)) * prev) /
            std::sqrt(static_cast<long double>(n) + 1.0L);
        prev = cur;
        cur = next;
    }
    hm = cur;
    hm1 = prev;
}

// Gauss-Legendre rule on [-1, 1], cached by node count.
const QuadratureRule& cached_gauss_legendre(int p) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;

    QuadratureRule rule;
    if (p == 1) {
        rule.nodes = {0.0};
        rule.weights = {2.0};
    } else {
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(p);
        Eigen::VectorXd sub(p - 1);
        for (int k = 1; k < p; ++k) {
            const double kk = static_cast<double>(k);
            sub[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
        }
        rule.nodes = jacobi_eigenvalues(diag, sub);
        rule.weights.resize(static_cast<size_t>(p));
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            double x = rule.nodes[i];
            double pn = 0.0, dpn = 0.0;
            for (int iter = 0; iter < 3; ++iter) {
                // P_n(x) by the standard recurrence, plus the derivative.
                double p0 = 1.0, p1 = x;
                for (int n = 1; n < p; ++n) {
                    const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
                    p0 = p1;
                    p1 = p2;
                }
                pn = p1;
                dpn = p * (x * p1 - p0) / (x * x - 1.0);
                x -= pn / dpn;
            }
            rule.nodes[i] = x;
            rule.weights[i] = 2.0 / ((1.0 - x * x) * dpn * dpn);
        }
    }
    return cache.emplace(p, std::move(rule)).first->second;
}

void symmetrize(QuadratureRule& rule) {
    const size_t m = rule.nodes.size();
    for (size_t i = 0; i < m / 2; ++i) {
        const size_t j = m - 1 - i;
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[j] = x;
        rule.nodes[i] = -x;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = rule.weights[j] = w;
    }
    if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
    long double total = 0.0L;
    for (double w : rule.weights) total += w;
    for (double& w : rule.weights) w = static_cast<double>(w / total);
}

} // namespace

QuadratureRule gauss_hermite_rule(int m) {
    if (m < 1)
        throw PreconditionError("gauss_hermite_rule: node count must be >= 1");
    QuadratureRule rule;
    if (m == 1) {
        rule.nodes = {0.0};
        rule.weights = {1.0};
        return rule;
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd sub(m - 1);
    for (int k = 1; k < m; ++k)
        sub[k - 1] = std::sqrt(static_cast<double>(k));
    rule.nodes = jacobi_eigenvalues(diag, sub);
    rule.weights.resize(static_cast<size_t>(m));

    // Newton-polish each node on the normalized polynomial, then use
    // w_i = 1 / (m h_{m-1}(x_i)^2); h' relations keep everything in the
    // overflow-safe normalized scale.
    const long double root_m = std::sqrt(static_cast<long double>(m));
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        long double x = rule.nodes[i];
        long double hm = 0.0L, hm1 = 0.0L;
        for (int iter = 0; iter < 4; ++iter) {
            hermite_pair(m, x, hm, hm1);
            x -= hm / (root_m * hm1);
        }
        hermite_pair(m, x, hm, hm1);
        rule.nodes[i] = static_cast<double>(x);
        rule.weights[i] =
            static_cast<double>(1.0L / (static_cast<long double>(m) * hm1 * hm1));
    }
    symmetrize(rule);
    return rule;
}

const QuadratureRule& cached_gauss_hermite(int m) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    return cache.emplace(m, gauss_hermite_rule(m)).first->second;
}

QuadratureRule composite_gaussian_rule(const std::vector<double>& breakpoints, int target_nodes,
                                       int nodes_per_panel, double domain_halfwidth) {
    if (target_nodes < 1 || nodes_per_panel < 1)
        throw PreconditionError("composite_gaussian_rule: node counts must be >= 1");
    const double L = domain_halfwidth;

    std::set<double> bounds = {-L, L};
    for (double b : breakpoints)
        if (b > -L && b < L) bounds.insert(b);

    const int min_panels = std::max(1, target_nodes / nodes_per_panel);
    const double max_width = 2.0 * L / static_cast<double>(min_panels);

    std::vector<double> edges;
    auto it = bounds.begin();
    double lo = *it++;
    edges.push_back(lo);
    for (; it != bounds.end(); ++it) {
        const double hi = *it;
        const int k = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width)));
        for (int j = 1; j <= k; ++j)
            edges.push_back(lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(k));
        lo = hi;
    }

    const QuadratureRule& gl = cached_gauss_legendre(nodes_per_panel);
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

    QuadratureRule rule;
    rule.nodes.reserve((edges.size() - 1) * gl.size());
    rule.weights.reserve((edges.size() - 1) * gl.size());
    for (size_t e = 0; e + 1 < edges.size(); ++e) {
        const double mid = 0.5 * (edges[e] + edges[e + 1]);
        const double half = 0.5 * (edges[e + 1] - edges[e]);
        for (size_t i = 0; i < gl.size(); ++i) {
            const double x = mid + half * gl.nodes[i];
            rule.nodes.push_back(x);
            rule.weights.push_back(half * gl.weights[i] * inv_sqrt_2pi * std::exp(-0.5 * x * x));
        }
    }
    return rule;
}

QuadratureRule rule_for(const FunctionSpec& g, double sigma, int smooth_nodes,
                        int composite_nodes) {
    const std::vector<double> breaks = g.breakpoints();
    if (breaks.empty())
        return cached_gauss_hermite(smooth_nodes);
    std::vector<double> standardized;
    standardized.reserve(breaks.size());
    for (double b : breaks)
        standardized.push_back(b / sigma);
    return composite_gaussian_rule(standardized, composite_nodes);
}

double HermiteSeries::weighted_norm() const {
    long double acc = 0.0L;
    long double fact = 1.0L;
    for (size_t n = 0; n < coeffs.size(); ++n) {
        if (n > 0) fact *= static_cast<long double>(n);
        acc += static_cast<long double>(coeffs[n]) * coeffs[n] / fact;
    }
    return static_cast<double>(std::sqrt(static_cast<double>(acc)));
}

HermiteSeries project(const FunctionSpec& g, double sigma, int order,
                      const QuadratureRule& rule) {
    if (!(sigma > 0.0))
        throw PreconditionError("project: sigma must be > 0");
    if (order < 0)
        throw PreconditionError("project: order must be >= 0");

    // Accumulate in the normalized basis He_n/sqrt(n!), then rescale.
    std::vector<long double> acc(static_cast<size_t>(order) + 1, 0.0L);
    for (size_t i = 0; i < rule.size(); ++i) {
        const double u = rule.nodes[i];
        const double wg = rule.weights[i] * g(sigma * u);
        const std::vector<double> row = hermite_normalized_row(order, u);
        for (int n = 0; n <= order; ++n)
            acc[static_cast<size_t>(n)] += static_cast<long double>(wg) * row[static_cast<size_t>(n)];
    }

    HermiteSeries s;
    s.sigma = sigma;
    s.coeffs.resize(static_cast<size_t>(order) + 1);
    long double fact = 1.0L;
    for (int n = 0; n <= order; ++n) {
        if (n > 0) fact *= static_cast<long double>(n);
        const double a = static_cast<double>(acc[static_cast<size_t>(n)] * std::sqrt(fact));
        if (!std::isfinite(a))
            throw DegeneracyError("project: non-finite coefficient at order n=" + std::to_string(n) +
                                  " for " + g.label());
        s.coeffs[static_cast<size_t>(n)] = a;
    }
    return s;
}

HermiteSeries project(const FunctionSpec& g, double sigma, int order) {
    return project(g, sigma, order, rule_for(g, sigma));
}

double reconstruct(const HermiteSeries& s, double x) {
    const int order = s.order();
    const std::vector<double> row = hermite_normalized_row(order, x / s.sigma);
    long double acc = 0.0L;
    long double fact = 1.0L;
    for (int n = 0; n <= order; ++n) {
        if (n > 0) fact *= static_cast<long double>(n);
        acc += static_cast<long double>(s.coeffs[static_cast<size_t>(n)]) / std::sqrt(fact) *
               row[static_cast<size_t>(n)];
    }
    return static_cast<double>(acc);
}

} // namespace xmom
