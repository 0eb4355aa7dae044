#include "xmom/channels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "xmom/errors.hpp"
#include "xmom/hermite.hpp"

namespace xmom {

namespace {

void check_distribution(const std::vector<double>& probs, const std::string& what) {
    long double total = 0.0L;
    for (double p : probs) {
        if (!(p >= 0.0))
            throw PreconditionError("channel: negative probability in " + what);
        total += p;
    }
    if (std::fabs(static_cast<double>(total) - 1.0) > 1e-12)
        throw PreconditionError("channel: " + what + " must sum to 1 within 1e-12");
}

} // namespace

ConditionalChannel::ConditionalChannel(FiniteChannel finite) : channel_(std::move(finite)) {
    const auto& ch = std::get<FiniteChannel>(channel_);
    if (ch.latent_values.empty() || ch.alphabet.empty())
        throw PreconditionError("channel: latent support and alphabet must be non-empty");
    if (ch.latent_probs.size() != ch.latent_values.size())
        throw PreconditionError("channel: latent table size mismatch");
    if (ch.rows.size() != ch.latent_values.size())
        throw PreconditionError("channel: one conditional row required per latent value");
    check_distribution(ch.latent_probs, "latent distribution");
    for (size_t i = 0; i < ch.rows.size(); ++i) {
        if (ch.rows[i].size() != ch.alphabet.size())
            throw PreconditionError("channel: conditional row " + std::to_string(i) +
                                    " size mismatch");
        check_distribution(ch.rows[i], "conditional row " + std::to_string(i));
    }
}

ConditionalChannel::ConditionalChannel(GaussianChannel gaussian) : channel_(gaussian) {
    if (!(gaussian.sigma_z2 > 0.0) || !(gaussian.sigma_w2 > 0.0))
        throw PreconditionError("channel: gaussian variances must be > 0");
}

const FiniteChannel& ConditionalChannel::finite() const {
    if (!is_finite())
        throw PreconditionError("channel: finite channel required");
    return std::get<FiniteChannel>(channel_);
}

const GaussianChannel& ConditionalChannel::gaussian() const {
    if (is_finite())
        throw PreconditionError("channel: gaussian channel required");
    return std::get<GaussianChannel>(channel_);
}

std::vector<double> ChannelFunc::table_for(const FiniteChannel& ch) const {
    if (is_table()) {
        const auto& t = std::get<std::vector<double>>(repr_);
        if (t.size() != ch.alphabet.size())
            throw PreconditionError("channel function: table covers " + std::to_string(t.size()) +
                                    " symbols but the alphabet has " +
                                    std::to_string(ch.alphabet.size()));
        return t;
    }
    const auto& spec = std::get<FunctionSpec>(repr_);
    std::vector<double> t(ch.alphabet.size());
    for (size_t j = 0; j < ch.alphabet.size(); ++j)
        t[j] = spec(ch.alphabet[j]);
    return t;
}

const FunctionSpec& ChannelFunc::spec() const {
    if (is_table())
        throw PreconditionError("channel function: a FunctionSpec is required here, got a table");
    return std::get<FunctionSpec>(repr_);
}

std::string ChannelFunc::label() const {
    if (!is_table())
        return std::get<FunctionSpec>(repr_).label();
    const auto& t = std::get<std::vector<double>>(repr_);
    std::string out = "table:";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(t[i]);
    }
    return out;
}

ConditionalChannel BernoulliXorChannel::expand() const {
    if (n_bits < 1)
        throw PreconditionError("bernoulli-xor: n_bits must be >= 1");
    if (n_bits > 20)
        throw PreconditionError("bernoulli-xor: n_bits too large to expand");
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw PreconditionError("bernoulli-xor: p and q must lie in [0, 1]");

    const uint32_t size = 1u << n_bits;
    FiniteChannel ch;
    ch.latent_values.resize(size);
    ch.latent_probs.resize(size);
    ch.alphabet.resize(size);
    ch.rows.assign(size, std::vector<double>(size));
    for (uint32_t v = 0; v < size; ++v) {
        ch.latent_values[v] = static_cast<double>(v);
        ch.alphabet[v] = static_cast<double>(v);
        const int ones = std::popcount(v);
        ch.latent_probs[v] =
            std::pow(p, ones) * std::pow(1.0 - p, n_bits - ones);
    }
    for (uint32_t z = 0; z < size; ++z)
        for (uint32_t out = 0; out < size; ++out) {
            const int flips = std::popcount(z ^ out);
            ch.rows[z][out] = std::pow(q, flips) * std::pow(1.0 - q, n_bits - flips);
        }
    return ConditionalChannel(std::move(ch));
}

std::vector<double> conditional_mean_table(const ConditionalChannel& ch, const ChannelFunc& g) {
    const FiniteChannel& fc = ch.finite();
    const std::vector<double> table = g.table_for(fc);
    std::vector<double> h(fc.latent_values.size());
    for (size_t i = 0; i < fc.rows.size(); ++i) {
        long double acc = 0.0L;
        for (size_t j = 0; j < table.size(); ++j)
            acc += static_cast<long double>(fc.rows[i][j]) * table[j];
        h[i] = static_cast<double>(acc);
    }
    return h;
}

std::function<double(double)> conditional_mean(const ConditionalChannel& ch,
                                               const ChannelFunc& g, int nodes) {
    if (ch.is_finite()) {
        const FiniteChannel& fc = ch.finite();
        auto h = conditional_mean_table(ch, g);
        auto values = fc.latent_values;
        return [h = std::move(h), values = std::move(values)](double z) {
            for (size_t i = 0; i < values.size(); ++i)
                if (values[i] == z) return h[i];
            throw PreconditionError("conditional mean: z is not in the latent support");
        };
    }
    const GaussianChannel gc = ch.gaussian();
    const FunctionSpec spec = g.spec();
    const double sw = std::sqrt(gc.sigma_w2);
    return [spec, sw, nodes](double z) {
        std::vector<double> breaks;
        for (double b : spec.breakpoints())
            breaks.push_back((b - z) / sw);
        const QuadratureRule rule =
            breaks.empty() ? cached_gauss_hermite(nodes)
                           : composite_gaussian_rule(breaks, std::max(nodes, 384));
        return rule.integrate([&](double u) { return spec(z + sw * u); });
    };
}

namespace {

CorrelationReport finite_lemma2(const FiniteChannel& fc, const ChannelFunc& g1,
                                const ChannelFunc& g2) {
    const std::vector<double> t1 = g1.table_for(fc);
    const std::vector<double> t2 = g2.table_for(fc);

    long double cross = 0.0L, auto1 = 0.0L, auto2 = 0.0L;
    for (size_t i = 0; i < fc.latent_values.size(); ++i) {
        long double h1 = 0.0L, h2 = 0.0L;
        for (size_t j = 0; j < fc.alphabet.size(); ++j) {
            h1 += static_cast<long double>(fc.rows[i][j]) * t1[j];
            h2 += static_cast<long double>(fc.rows[i][j]) * t2[j];
        }
        const long double p = fc.latent_probs[i];
        cross += p * h1 * h2;
        auto1 += p * h1 * h1;
        auto2 += p * h2 * h2;
    }

    CorrelationReport r;
    r.cross = static_cast<double>(cross);
    r.auto1 = static_cast<double>(auto1);
    r.auto2 = static_cast<double>(auto2);
    r.lhs = static_cast<double>(cross * cross);
    r.rhs = static_cast<double>(auto1 * auto2);
    r.slack = static_cast<double>(auto1 * auto2 - cross * cross);
    r.engine = Engine::Quadrature; // exact finite sums; reported tolerance below
    r.tolerance = 1e-12;
    r.equality = std::fabs(r.slack) <= r.tolerance;
    r.route = "lemma2";
    return r;
}

CorrelationReport gaussian_lemma2(const ConditionalChannel& ch, const ChannelFunc& g1,
                                  const ChannelFunc& g2, int nodes) {
    const GaussianChannel gc = ch.gaussian();
    const double sz = std::sqrt(gc.sigma_z2);
    const auto h1 = conditional_mean(ch, g1, nodes);
    const auto h2 = conditional_mean(ch, g2, nodes);

    // h_i are smoothed by the conditional integration, so plain Gauss-Hermite
    // suffices for the outer expectation over Z.
    const QuadratureRule& outer = cached_gauss_hermite(std::max(nodes, 128));
    long double cross = 0.0L, auto1 = 0.0L, auto2 = 0.0L;
    for (size_t i = 0; i < outer.size(); ++i) {
        const double z = sz * outer.nodes[i];
        const double v1 = h1(z);
        const double v2 = h2(z);
        const long double w = outer.weights[i];
        cross += w * v1 * v2;
        auto1 += w * v1 * v1;
        auto2 += w * v2 * v2;
    }

    CorrelationReport r;
    r.cross = static_cast<double>(cross);
    r.auto1 = static_cast<double>(auto1);
    r.auto2 = static_cast<double>(auto2);
    r.lhs = static_cast<double>(cross * cross);
    r.rhs = static_cast<double>(auto1 * auto2);
    r.slack = static_cast<double>(auto1 * auto2 - cross * cross);
    r.engine = Engine::Quadrature;
    r.tolerance = equality_tolerance(Engine::Quadrature);
    r.equality = std::fabs(r.slack) <= r.tolerance;
    r.route = "lemma2";
    return r;
}

} // namespace

CorrelationReport lemma2_check(const ConditionalChannel& ch, const ChannelFunc& g1,
                               const ChannelFunc& g2, int nodes) {
    if (ch.is_finite())
        return finite_lemma2(ch.finite(), g1, g2);
    return gaussian_lemma2(ch, g1, g2, nodes);
}

double enumerate_expectation(const ConditionalChannel& ch, const ChannelFunc& g1,
                             const ChannelFunc& g2) {
    const FiniteChannel& fc = ch.finite();
    const size_t joint = fc.latent_values.size() * fc.alphabet.size() * fc.alphabet.size();
    if (joint > (1u << 20))
        throw PreconditionError("enumerate_expectation: " + std::to_string(joint) +
                                " joint outcomes exceed the 2^20 cap");
    const std::vector<double> t1 = g1.table_for(fc);
    const std::vector<double> t2 = g2.table_for(fc);

    long double acc = 0.0L;
    for (size_t i = 0; i < fc.latent_values.size(); ++i) {
        const long double pz = fc.latent_probs[i];
        for (size_t j = 0; j < fc.alphabet.size(); ++j) {
            const long double pj = fc.rows[i][j] * t1[j];
            if (pj == 0.0L) continue;
            for (size_t k = 0; k < fc.alphabet.size(); ++k)
                acc += pz * pj * fc.rows[i][k] * t2[k];
        }
    }
    return static_cast<double>(acc);
}

ConditionalChannel gaussian_as_channel(double sigma, double rho) {
    if (!(sigma > 0.0))
        throw PreconditionError("gaussian_as_channel: sigma must be > 0");
    if (!(rho > 0.0 && rho < 1.0))
        throw PreconditionError(
            "gaussian_as_channel: rho must lie in (0, 1); the symmetric additive "
            "decomposition cannot realize rho <= 0");
    GaussianChannel gc;
    gc.sigma_z2 = rho * sigma * sigma;
    gc.sigma_w2 = (1.0 - rho) * sigma * sigma;
    return ConditionalChannel(gc);
}

ConditionalChannel parse_channel_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError(std::string("channel json: ") + e.what());
    }
    if (j.contains("n_bits")) {
        BernoulliXorChannel bx;
        bx.n_bits = j.at("n_bits").get<int>();
        bx.p = j.at("p").get<double>();
        bx.q = j.at("q").get<double>();
        return bx.expand();
    }
    if (!j.contains("latent") || !j.contains("conditional"))
        throw PreconditionError(
            "channel json: expected {latent, conditional} or {n_bits, p, q}");

    // Keys are stringified values; order maps follow numeric value.
    std::map<double, double> latent;
    for (const auto& [key, value] : j.at("latent").items())
        latent[std::stod(key)] = value.get<double>();

    std::map<double, std::map<double, double>> conditional;
    std::map<double, double> alphabet_set;
    for (const auto& [zkey, row] : j.at("conditional").items()) {
        auto& dest = conditional[std::stod(zkey)];
        for (const auto& [okey, prob] : row.items()) {
            const double sym = std::stod(okey);
            dest[sym] = prob.get<double>();
            alphabet_set[sym] = 0.0;
        }
    }

    FiniteChannel fc;
    for (const auto& [sym, unused] : alphabet_set)
        fc.alphabet.push_back(sym);
    for (const auto& [z, prob] : latent) {
        fc.latent_values.push_back(z);
        fc.latent_probs.push_back(prob);
        auto it = conditional.find(z);
        if (it == conditional.end())
            throw PreconditionError("channel json: no conditional row for latent value " +
                                    std::to_string(z));
        std::vector<double> row(fc.alphabet.size(), 0.0);
        for (size_t jdx = 0; jdx < fc.alphabet.size(); ++jdx) {
            auto pit = it->second.find(fc.alphabet[jdx]);
            if (pit != it->second.end()) row[jdx] = pit->second;
        }
        fc.rows.push_back(std::move(row));
    }
    return ConditionalChannel(std::move(fc));
}

} // namespace xmom
