#pragma once

// Tiny deterministic RNG (splitmix64). Hand-rolled on purpose: results must
// be byte-identical for a fixed seed across runs and thread counts, so we
// avoid implementation-defined std::distribution internals and give each
// parallel unit of work its own stream keyed off (seed, index).

#include <cmath>
#include <cstdint>

namespace halrates {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

class SmallRng {
public:
    explicit SmallRng(std::uint64_t seed) : state_(seed) {}

    // Independent stream for the k-th unit of work under a base seed.
    static SmallRng for_stream(std::uint64_t seed, std::uint64_t k) {
        return SmallRng(splitmix64(seed ^ splitmix64(k + 0x632BE59BD9B4E019ull)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    // Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1] (safe as a log argument).
    double next_unit_pos() { return 1.0 - next_unit(); }

    // Standard normal via Box-Muller.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = next_unit_pos();
        double v = next_unit();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace halrates
