#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "langbench/error.hpp"

namespace langbench {

// Seeded pseudo-random stream. The engine is mt19937_64 and every draw below
// is defined in terms of its raw 64-bit output only, so sampled corpora and
// evolution runs are identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Unbiased integer in [0,n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw Error("Rng::below(0)");
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    std::string save_state() const {
        std::ostringstream out;
        out << engine_;
        return out.str();
    }

    void load_state(const std::string& state) {
        std::istringstream in(state);
        in >> engine_;
        if (!in) throw FormatError("cannot parse RNG state");
    }

private:
    std::mt19937_64 engine_;
};

// Draws n with P(n) = p * (1-p)^n over support {0, 1, 2, ...}, by counting
// failures before the first Bernoulli success. Uses comparisons only, so the
// stream is exactly reproducible everywhere.
inline long long geometric_draw(double p, Rng& rng) {
    if (!(p > 0.0 && p < 1.0)) throw UsageError("geometric prior must lie in (0,1)");
    long long n = 0;
    while (!rng.bernoulli(p)) ++n;
    return n;
}

}  // namespace langbench
