#ifndef XMOM_SIMULATE_HPP
#define XMOM_SIMULATE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xmom/function_spec.hpp"
#include "xmom/mehler.hpp"

namespace xmom {

/// A time-average estimate with its standard error (sample std / sqrt(n)).
struct MomentEstimate {
    double value = 0.0;
    double se = 0.0;
};

/// Configuration of the signal chain y = f(x + w), x ~ N(0, sigma_x2) i.i.d.,
/// w ~ N(0, sigma_w2) i.i.d. independent of x.
struct ChainConfig {
    double sigma_x2 = 1.0;
    double sigma_w2 = 1.0;
    FunctionSpec f = FunctionSpec::identity();
    int64_t samples = 1'000'000;
    uint64_t seed = 1;
    int chunks = 1; // worker parallelism; has no effect on the generated bytes

    double sigma_z2() const { return sigma_x2 + sigma_w2; }
    double alpha() const; // sqrt(sigma_z2 / sigma_x2)
    void validate() const;
};

struct ColumnStats {
    double mean = 0.0;
    double var = 0.0; // unbiased sample variance
};

struct ChainDataset {
    ChainConfig config;
    std::vector<double> x, z, y;
    ColumnStats x_stats, z_stats, y_stats;

    int64_t size() const { return static_cast<int64_t>(x.size()); }
};

struct PairSample {
    std::vector<double> z1, z2;
};

ColumnStats column_stats(std::span<const double> column);

/// n draws of the correlated pair: Z1 = sigma U, Z2 = sigma (rho U + sqrt(1-rho^2) V)
/// with U, V independent standard normals. Deterministic under (seed).
PairSample sample_bivariate(const GaussianPairParams& p, int64_t n, uint64_t seed);

/// Generate the chain dataset. Deterministic under (seed) regardless of the
/// chunk count: every sample index draws from its own counter.
ChainDataset run_chain(const ChainConfig& cfg);

/// Synthetic AWGN column w' ~ N(0, sigma_w2), independent of the chain draws
/// when seed2 differs from the chain seed.
std::vector<double> synth_noise(const ChainConfig& cfg, uint64_t seed2);

struct MomentColumn {
    std::span<const double> data;
    const FunctionSpec* transform = nullptr; // null = identity
};

/// Mean of the row-wise product of the transformed columns, with standard
/// error. All columns must share the same length n >= 2.
MomentEstimate estimate_moment(const std::vector<MomentColumn>& columns);

/// Columnar CSV (x,z,y; 17 significant digits) plus a JSON sidecar carrying
/// the config. Paths are <prefix>.csv and <prefix>.json.
void write_dataset(const ChainDataset& ds, const std::string& prefix);
ChainDataset read_dataset(const std::string& prefix);

} // namespace xmom

#endif
