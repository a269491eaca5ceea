#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace stbc {

// Small counter-style generator (splitmix64). Every stream is a pure
// function of (seed, id0, id1, id2), so draws do not depend on thread
// scheduling as long as each logical task owns its own stream.
class Rng {
public:
    explicit Rng(uint64_t state) : state_(state) {}

    // splitmix64 finalizer; also used to derive stream seeds.
    static uint64_t mix64(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static Rng from_stream(uint64_t seed, uint64_t id0, uint64_t id1 = 0,
                           uint64_t id2 = 0) {
        uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
        h = mix64(h ^ id0);
        h = mix64(h ^ id1);
        h = mix64(h ^ id2);
        return Rng(h);
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log() argument.
    double uniform_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Uniform index in [0, n); n must be a power of two.
    uint64_t next_index(uint64_t n) { return next_u64() & (n - 1); }

    // Uniform index in [0, n) for arbitrary n via fixed-point multiply.
    // Bias is below 2^-64 per draw, immaterial at Monte Carlo scales.
    uint64_t uniform_below(uint64_t n) {
        return uint64_t((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller; second value of each pair is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double a = 2.0 * std::numbers::pi * next_double();
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Circularly symmetric complex normal with total variance var.
    std::complex<double> cgaussian(double var) {
        const double s = std::sqrt(0.5 * var);
        const double re = gaussian();
        const double im = gaussian();
        return {s * re, s * im};
    }

private:
    uint64_t state_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace stbc
