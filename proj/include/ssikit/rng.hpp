#pragma once

#include <cmath>
#include <cstdint>

namespace ssikit {

// splitmix64: small, fully specified 64-bit generator. Every seeded stream in
// the toolkit goes through this class so generated data is reproducible
// across platforms and compilers (std::normal_distribution et al. are
// implementation-defined and would not be).
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi]. Modulo bias is negligible for the small
    // ranges used here (< 2^16 out of 2^64).
    uint64_t next_in(uint64_t lo, uint64_t hi) { return lo + next_u64() % (hi - lo + 1); }

    // Standard normal deviate, Box-Muller, second value cached.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = next_double();                       // [0, 1)
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log1p(-u1));    // log(1-u1), never log(0)
        double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ssikit
