#pragma once

#include <cmath>
#include <cstdint>

namespace numeasure {

// Counter-based generator: the k-th output is a fixed 64-bit mix of
// (seed, stream, k). Sequences are reproducible across platforms and
// independent streams can be handed to worker threads without sharing
// state. Normal variates use Box-Muller on the raw uniforms.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(derive_key(seed, stream)) {}

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

    // Uniform on (0,1), both endpoints excluded (safe under log).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound).
    std::uint64_t uniform_index(std::uint64_t bound) { return next_u64() % bound; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Sum of k unit exponentials; Gamma(k,1) for integer shape.
    double gamma_integer(int k) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i) acc -= std::log(uniform());
        return acc;
    }

    double beta_integer(int p, int q) {
        const double g1 = gamma_integer(p);
        const double g2 = gamma_integer(q);
        return g1 / (g1 + g2);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
        return mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^ (stream * 0xD1342543DE82EF95ULL + 1));
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace numeasure
