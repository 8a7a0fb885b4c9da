#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gdsq {

// Seeded generator with samplers that do not depend on the standard library's
// distribution implementations, so pinned-seed fixtures are stable across
// toolchains. Streams derived from (seed, stream) are independent enough for
// per-trial use and make parallel runs schedule-invariant.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        eng_.seed(seq);
    }

    std::uint64_t bits() { return eng_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller, cosine branch only. Two engine draws per sample keeps the
    // call sequence stateless.
    double gaussian(double mean = 0.0, double stddev = 1.0) {
        double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = uniform01();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
        return mean + stddev * z;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace gdsq
