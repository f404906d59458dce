#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hslra {

// Deterministic random source. std::normal_distribution is implementation
// defined, so Gaussians come from a fixed Box-Muller transform over the raw
// mt19937_64 stream: identical seeds give identical draws on every build of
// this code against the same libm.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on (0, 1]; never returns 0 so log() below is safe.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    // Decorrelated child seed for a numbered stream (trial, trajectory, ...).
    static std::uint64_t stream(std::uint64_t base, std::uint64_t stream_id) {
        std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream_id + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace hslra
