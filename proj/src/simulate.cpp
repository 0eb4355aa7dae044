#include "xmom/simulate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

#include <nlohmann/json.hpp>

#include "xmom/errors.hpp"
#include "xmom/rng.hpp"

namespace xmom {

namespace {

// Column stream ids. Synthetic noise reuses kStreamW under its own seed.
constexpr uint64_t kStreamX = 0;
constexpr uint64_t kStreamW = 1;

void parallel_fill(int64_t n, int chunks, const std::function<void(int64_t, int64_t)>& fill) {
    const int workers = std::max<int>(1, static_cast<int>(std::min<int64_t>(chunks, n)));
    if (workers == 1) {
        fill(0, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(workers));
    for (int c = 0; c < workers; ++c) {
        const int64_t lo = n * c / workers;
        const int64_t hi = n * (c + 1) / workers;
        threads.emplace_back(fill, lo, hi);
    }
    for (auto& t : threads) t.join();
}

std::string format17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

} // namespace

double ChainConfig::alpha() const { return std::sqrt(sigma_z2() / sigma_x2); }

void ChainConfig::validate() const {
    if (!(sigma_x2 > 0.0))
        throw PreconditionError("chain config: sigma_x2 must be > 0");
    if (!(sigma_w2 > 0.0))
        throw PreconditionError("chain config: sigma_w2 must be > 0");
    if (samples < 1)
        throw PreconditionError("chain config: samples must be >= 1");
    if (chunks < 1)
        throw PreconditionError("chain config: chunks must be >= 1");
}

ColumnStats column_stats(std::span<const double> column) {
    const size_t n = column.size();
    long double sum = 0.0L;
    for (double v : column) sum += v;
    const long double mean = n > 0 ? sum / static_cast<long double>(n) : 0.0L;
    long double ss = 0.0L;
    for (double v : column) {
        const long double d = v - mean;
        ss += d * d;
    }
    ColumnStats st;
    st.mean = static_cast<double>(mean);
    st.var = n > 1 ? static_cast<double>(ss / static_cast<long double>(n - 1)) : 0.0;
    return st;
}

PairSample sample_bivariate(const GaussianPairParams& p, int64_t n, uint64_t seed) {
    if (n < 1)
        throw PreconditionError("sample_bivariate: n must be >= 1");
    PairSample out;
    out.z1.resize(static_cast<size_t>(n));
    out.z2.resize(static_cast<size_t>(n));
    const double s = std::sqrt(1.0 - p.rho * p.rho);
    for (int64_t i = 0; i < n; ++i) {
        const double u = standard_normal(seed, kStreamX, static_cast<uint64_t>(i));
        const double v = standard_normal(seed, kStreamW, static_cast<uint64_t>(i));
        out.z1[static_cast<size_t>(i)] = p.sigma * u;
        out.z2[static_cast<size_t>(i)] = p.sigma * (p.rho * u + s * v);
    }
    return out;
}

ChainDataset run_chain(const ChainConfig& cfg) {
    cfg.validate();
    ChainDataset ds;
    ds.config = cfg;
    const int64_t n = cfg.samples;
    ds.x.resize(static_cast<size_t>(n));
    ds.z.resize(static_cast<size_t>(n));
    ds.y.resize(static_cast<size_t>(n));

    const double sx = std::sqrt(cfg.sigma_x2);
    const double sw = std::sqrt(cfg.sigma_w2);
    const FunctionSpec f = cfg.f;

    parallel_fill(n, cfg.chunks, [&](int64_t lo, int64_t hi) {
        for (int64_t i = lo; i < hi; ++i) {
            const double xi = sx * standard_normal(cfg.seed, kStreamX, static_cast<uint64_t>(i));
            const double wi = sw * standard_normal(cfg.seed, kStreamW, static_cast<uint64_t>(i));
            const double zi = xi + wi;
            ds.x[static_cast<size_t>(i)] = xi;
            ds.z[static_cast<size_t>(i)] = zi;
            ds.y[static_cast<size_t>(i)] = f(zi);
        }
    });

    ds.x_stats = column_stats(ds.x);
    ds.z_stats = column_stats(ds.z);
    ds.y_stats = column_stats(ds.y);
    return ds;
}

std::vector<double> synth_noise(const ChainConfig& cfg, uint64_t seed2) {
    cfg.validate();
    const double sw = std::sqrt(cfg.sigma_w2);
    std::vector<double> out(static_cast<size_t>(cfg.samples));
    parallel_fill(cfg.samples, cfg.chunks, [&](int64_t lo, int64_t hi) {
        for (int64_t i = lo; i < hi; ++i)
            out[static_cast<size_t>(i)] = sw * standard_normal(seed2, kStreamW, static_cast<uint64_t>(i));
    });
    return out;
}

MomentEstimate estimate_moment(const std::vector<MomentColumn>& columns) {
    if (columns.empty())
        throw PreconditionError("estimate_moment: at least one column required");
    const size_t n = columns.front().data.size();
    for (const auto& c : columns)
        if (c.data.size() != n)
            throw PreconditionError("estimate_moment: column length mismatch");
    if (n < 2)
        throw PreconditionError("estimate_moment: need at least 2 rows");

    long double sum = 0.0L, sumsq = 0.0L;
    for (size_t i = 0; i < n; ++i) {
        double prod = 1.0;
        for (const auto& c : columns) {
            const double v = c.data[i];
            prod *= c.transform ? (*c.transform)(v) : v;
        }
        sum += prod;
        sumsq += static_cast<long double>(prod) * prod;
    }
    const long double mean = sum / static_cast<long double>(n);
    long double var = (sumsq - static_cast<long double>(n) * mean * mean) /
                      static_cast<long double>(n - 1);
    if (var < 0.0L) var = 0.0L;
    MomentEstimate est;
    est.value = static_cast<double>(mean);
    est.se = static_cast<double>(std::sqrt(static_cast<double>(var)) /
                                 std::sqrt(static_cast<double>(n)));
    return est;
}

void write_dataset(const ChainDataset& ds, const std::string& prefix) {
    std::ofstream csv(prefix + ".csv");
    if (!csv)
        throw PreconditionError("write_dataset: cannot open " + prefix + ".csv");
    csv << "x,z,y\n";
    for (size_t i = 0; i < ds.x.size(); ++i)
        csv << format17(ds.x[i]) << ',' << format17(ds.z[i]) << ',' << format17(ds.y[i]) << '\n';

    nlohmann::json sidecar = {
        {"sigma_x2", ds.config.sigma_x2}, {"sigma_w2", ds.config.sigma_w2},
        {"f", ds.config.f.label()},       {"samples", ds.config.samples},
        {"seed", ds.config.seed},         {"chunks", ds.config.chunks},
    };
    std::ofstream js(prefix + ".json");
    if (!js)
        throw PreconditionError("write_dataset: cannot open " + prefix + ".json");
    js << sidecar.dump(2) << '\n';
}

ChainDataset read_dataset(const std::string& prefix) {
    std::ifstream js(prefix + ".json");
    if (!js)
        throw PreconditionError("read_dataset: cannot open " + prefix + ".json");
    nlohmann::json sidecar;
    try {
        sidecar = nlohmann::json::parse(js);
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError("read_dataset: bad sidecar JSON: " + std::string(e.what()));
    }

    ChainDataset ds;
    ds.config.sigma_x2 = sidecar.at("sigma_x2").get<double>();
    ds.config.sigma_w2 = sidecar.at("sigma_w2").get<double>();
    ds.config.f = parse_function(sidecar.at("f").get<std::string>());
    ds.config.samples = sidecar.at("samples").get<int64_t>();
    ds.config.seed = sidecar.at("seed").get<uint64_t>();
    ds.config.chunks = sidecar.at("chunks").get<int>();

    std::ifstream csv(prefix + ".csv");
    if (!csv)
        throw PreconditionError("read_dataset: cannot open " + prefix + ".csv");
    std::string line;
    std::getline(csv, line); // header
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        double vals[3];
        size_t pos = 0;
        for (int k = 0; k < 3; ++k) {
            size_t comma = line.find(',', pos);
            if (comma == std::string::npos) comma = line.size();
            const auto res =
                std::from_chars(line.data() + pos, line.data() + comma, vals[k]);
            if (res.ec != std::errc())
                throw PreconditionError("read_dataset: bad number in " + prefix + ".csv");
            pos = comma + 1;
        }
        ds.x.push_back(vals[0]);
        ds.z.push_back(vals[1]);
        ds.y.push_back(vals[2]);
    }
    ds.x_stats = column_stats(ds.x);
    ds.z_stats = column_stats(ds.z);
    ds.y_stats = column_stats(ds.y);
    return ds;
}

} // namespace xmom
