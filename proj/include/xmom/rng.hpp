#ifndef XMOM_RNG_HPP
#define XMOM_RNG_HPP

#include <array>
#include <cstdint>

namespace xmom {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011). Every draw
// is a pure function of (seed, stream, index); any partition of the index
// space across threads reproduces bit-identical values.
std::array<uint32_t, 4> philox4x32(uint64_t seed, uint64_t stream, uint64_t index);

/// Uniform draw strictly inside (0, 1).
double uniform01(uint64_t seed, uint64_t stream, uint64_t index);

/// Standard normal draw via the inverse-CDF transform of uniform01.
double standard_normal(uint64_t seed, uint64_t stream, uint64_t index);

/// Inverse of the standard normal CDF (Wichura's AS241 PPND16, double
/// precision). Requires 0 < p < 1.
double normal_icdf(double p);

} // namespace xmom

#endif
