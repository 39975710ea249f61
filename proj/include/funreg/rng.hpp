#pragma once

#include <cstdint>
#include <random>

namespace funreg::rng {

//! SplitMix64 finalizer; a bijection on 64-bit words with good avalanche.
constexpr std::uint64_t
mix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

//! Key of the stream (seed, a, b). Distinct triples give unrelated keys.
constexpr std::uint64_t
stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
{
  return mix64(mix64(mix64(seed) ^ a) ^ mix64(b + 0x632be59bd9b4e019ULL));
}

//! Counter-based uniform draw in [0,1), a pure function of (seed, a, b).
constexpr double
counter_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
{
  return static_cast<double>(stream_key(seed, a, b) >> 11) * 0x1.0p-53;
}

//! Sequential engine for the stream (seed, a, b).
inline std::mt19937_64
stream_engine(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
{
  return std::mt19937_64(stream_key(seed, a, b));
}

//! U[0,1) from a 64-bit engine, using the top 53 bits.
inline double
uniform01(std::mt19937_64& engine)
{
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

} // namespace funreg::rng
