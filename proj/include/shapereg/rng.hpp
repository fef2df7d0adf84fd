#pragma once

// Deterministic random source shared by the whole toolkit.
//
// Engine: std::mt19937_64 seeded directly with the user seed.  The engine's
// output sequence is fully specified by the C++ standard, so streams are
// reproducible across platforms and standard libraries.  All derived draws
// deliberately avoid std::uniform_*_distribution / std::normal_distribution,
// whose outputs are implementation-defined:
//
//   * uniform01()   -> (next_u64() >> 11) * 2^-53, uniform on [0, 1)
//   * below(bound)  -> unbiased bounded integer via rejection sampling
//   * normal()      -> Box-Muller, cosine branch only; every call consumes
//                      exactly two uniforms
//
// Sub-streams are derived with a splitmix64-based mix so that, for example,
// covariate draws do not move when the noise stream is used differently.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace shapereg {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Stable seed derivation: folds `tag` into `seed`.  Chain calls to derive
// seeds from several coordinates, e.g. mix_seed(mix_seed(base, n), rep).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed ^ (0x9E3779B97F4A7C15ULL + splitmix64(tag)));
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random mantissa bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer on {0, ..., bound-1}, unbiased (rejection sampling).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r = next_u64();
        while (r >= limit) r = next_u64();
        return r % bound;
    }

    // Standard normal deviate; Box-Muller cosine branch.
    double normal() {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace shapereg
