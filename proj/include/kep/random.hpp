// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_RANDOM_HPP
#define KEP_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>
#include "kep/sparse.hpp"

namespace kep
{

// Uniform deviates in (-1, 1) from a 64-bit Mersenne twister. The mapping from raw bits is
// explicit so the sequence is identical across standard libraries.
class UniformSource
{
public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

  double Next()
  {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;  // [0, 1)
    return 2.0 * u - 1.0;
  }

  std::vector<double> Vector(Index n)
  {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto &x : v)
    {
      x = Next();
    }
    return v;
  }

  std::uint64_t Bits() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

// Independent streams for the different random draws of one run.
inline std::uint64_t StreamSeed(std::uint64_t seed, std::uint64_t stream)
{
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace kep

#endif  // KEP_RANDOM_HPP
