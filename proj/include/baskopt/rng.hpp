#ifndef BASKOPT_RNG_HPP
#define BASKOPT_RNG_HPP

#include <cmath>
#include <cstdint>

namespace baskopt {

inline constexpr const char* rng_algorithm_id = "splitmix64";

/// splitmix64 finalizer (Vigna / Steele et al.): shift-xor-multiply avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// splitmix64 generator: the state advances by the golden-ratio increment and
/// each output is the mix64 avalanche of the new state. Reference sequence
/// from seed 0: 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F...
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal deviate via Box-Muller (two uniforms per call).
    double next_gaussian() {
        const double u1 = 1.0 - next_double(); // (0, 1]
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::uint64_t state_;
};

/// Seed for substream k of a base seed: mix64(base ^ (golden * (k+1))).
/// Distinct k give distinct inputs, so substreams are decorrelated and a
/// dataset's stream depends only on (base, k), not on evaluation order.
inline constexpr std::uint64_t substream_seed(std::uint64_t base, std::uint64_t k) {
    return mix64(base ^ (0x9E3779B97F4A7C15ULL * (k + 1)));
}

} // namespace baskopt

#endif
