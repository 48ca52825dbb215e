#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>

#include "gridrl/errors.hpp"

namespace gridrl {

// Counter-based splitmix64 generator. All distribution transforms are
// written out explicitly so the draw sequence is identical on every
// platform (std::uniform_real_distribution and friends are not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        ++counter_;
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; consumes exactly two uniforms.
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Uniform integer in [0, n). Modulo bias is irrelevant at the n used here.
    int uniform_int(int n) {
        if (n <= 0) throw ArgumentError("uniform_int requires n > 0");
        return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
    }

    // Inverse-CDF draw from an (unnormalized is fine) nonnegative weight vector.
    int categorical(std::span<const double> weights) {
        if (weights.empty()) throw ArgumentError("categorical on empty weight vector");
        double total = 0.0;
        for (double w : weights) total += w;
        if (!(total > 0.0)) throw ArgumentError("categorical weights sum to zero");
        double u = uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

    std::uint64_t counter() const { return counter_; }

    // Deterministic stream derivation: one master seed fans out into
    // independent substreams keyed by an integer path.
    static std::uint64_t derive(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
        std::uint64_t x = mix(base ^ 0x5851f42d4c957f2dULL);
        for (std::uint64_t p : path) {
            x = mix(x ^ mix(p + 0x9e3779b97f4a7c15ULL));
        }
        return x;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 33;
        z *= 0xff51afd7ed558ccdULL;
        z ^= z >> 33;
        z *= 0xc4ceb9fe1a85ec53ULL;
        z ^= z >> 33;
        return z;
    }

    std::uint64_t state_;
    std::uint64_t counter_ = 0;
};

}  // namespace gridrl
