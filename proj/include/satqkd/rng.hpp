#pragma once

#include <cstdint>
#include <random>

namespace satqkd {

/// Engine used by every sampler. mt19937_64 output is fixed by the standard,
/// and distributions come from Boost.Random, so draws are identical across
/// platforms for a given seed.
using Rng = std::mt19937_64;

/// Independent stream for (seed, stream index). Each pass sample or worker
/// gets its own stream so parallel and serial runs draw the same numbers.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

}  // namespace satqkd
