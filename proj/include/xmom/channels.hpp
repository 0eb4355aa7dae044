#ifndef XMOM_CHANNELS_HPP
#define XMOM_CHANNELS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "xmom/function_spec.hpp"
#include "xmom/inequality.hpp"

namespace xmom {

/// Finite channel: latent Z over `latent_values` with `latent_probs`;
/// Z1, Z2 drawn i.i.d. from `rows[i]` over `alphabet` given Z = latent_values[i].
struct FiniteChannel {
    std::vector<double> latent_values;
    std::vector<double> latent_probs;
    std::vector<double> alphabet; // output symbol values
    std::vector<std::vector<double>> rows; // rows[i][j] = P(Z_k = alphabet[j] | Z = latent_values[i])
};

/// Gaussian channel: Z ~ N(0, sigma_z2); Z_i = Z + W_i, W_i ~ N(0, sigma_w2) i.i.d.
struct GaussianChannel {
    double sigma_z2 = 1.0;
    double sigma_w2 = 1.0;
};

/// A latent variable plus a conditional law producing conditionally i.i.d.
/// Z1, Z2. Probabilities are validated on construction (rows and the latent
/// table sum to 1 within 1e-12 in the finite case).
class ConditionalChannel {
public:
    explicit ConditionalChannel(FiniteChannel finite);
    explicit ConditionalChannel(GaussianChannel gaussian);

    bool is_finite() const { return std::holds_alternative<FiniteChannel>(channel_); }
    const FiniteChannel& finite() const;
    const GaussianChannel& gaussian() const;

private:
    std::variant<FiniteChannel, GaussianChannel> channel_;
};

/// A function on the channel output: an explicit value table aligned with the
/// finite alphabet, or a FunctionSpec evaluated at symbol values (required
/// for Gaussian channels).
class ChannelFunc {
public:
    ChannelFunc(std::vector<double> table) : repr_(std::move(table)) {}
    ChannelFunc(FunctionSpec spec) : repr_(std::move(spec)) {}

    bool is_table() const { return std::holds_alternative<std::vector<double>>(repr_); }
    /// Table aligned with the channel alphabet; validates size in the table
    /// case and evaluates the spec at symbol values otherwise.
    std::vector<double> table_for(const FiniteChannel& ch) const;
    const FunctionSpec& spec() const;
    std::string label() const;

private:
    std::variant<std::vector<double>, FunctionSpec> repr_;
};

/// N-bit Bernoulli-XOR channel: Z has i.i.d. Bernoulli(p) bits, Z_i = Z xor W_i
/// with W_i i.i.d. Bernoulli(q) bit vectors. Symbols are encoded as the
/// integer value of the bit vector.
struct BernoulliXorChannel {
    int n_bits = 1;
    double p = 0.5;
    double q = 0.5;

    ConditionalChannel expand() const;
};

/// h(z) = E[g(Z1) | Z = z] on the latent support (finite channels, exact).
std::vector<double> conditional_mean_table(const ConditionalChannel& ch, const ChannelFunc& g);

/// h as a callable on the latent value (both channel kinds; the Gaussian case
/// integrates g against N(z, sigma_w2) with breakpoint-aligned quadrature).
std::function<double(double)> conditional_mean(const ConditionalChannel& ch,
                                               const ChannelFunc& g, int nodes = 128);

/// Lemma-2 verdict via the conditional-mean route:
/// lhs = E^2[h1(Z)h2(Z)], rhs = E[h1^2(Z)] E[h2^2(Z)].
CorrelationReport lemma2_check(const ConditionalChannel& ch, const ChannelFunc& g1,
                               const ChannelFunc& g2, int nodes = 128);

/// Brute-force oracle: exact sum of g1(z1) g2(z2) over all (z, z1, z2) triples.
/// Rejects channels with more than 2^20 joint outcomes.
double enumerate_expectation(const ConditionalChannel& ch, const ChannelFunc& g1,
                             const ChannelFunc& g2);

/// The additive decomposition realizing a (sigma, rho) Gaussian pair as a
/// conditionally i.i.d. channel: sigma_z2 = rho sigma^2, sigma_w2 = (1-rho) sigma^2.
/// Requires 0 < rho < 1.
ConditionalChannel gaussian_as_channel(double sigma, double rho);

/// Parse the channel JSON: {latent: {value: prob}, conditional: {z: {z_i: prob}}}
/// or the shortcut {n_bits, p, q}.
ConditionalChannel parse_channel_json(const std::string& text);

} // namespace xmom

#endif
