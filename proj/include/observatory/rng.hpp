#pragma once

#include <cstdint>
#include <vector>

namespace observatory {

/// splitmix64-based generator. Standard-library distributions are
/// implementation-defined, so every sampling helper lives here to keep
/// corpora bit-identical across platforms and compilers.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n); n must be > 0. Rejection-free multiply-shift
    /// would bias noticeably only for astronomically large n.
    uint64_t below(uint64_t n) { return next_u64() % n; }

    /// Uniform double in [0, 1).
    double real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return real() < p; }

    /// Fisher-Yates, deterministic order.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Fork a stream keyed by a label so independent record families do
    /// not perturb each other's draws when counts change.
    Rng fork(uint64_t key) const {
        Rng child(state_ ^ (0xD6E8FEB86659FD93ULL * (key + 1)));
        child.next_u64();
        return child;
    }

private:
    uint64_t state_;
};

/// Inverse-CDF sample from a discrete power law P(k) ~ k^-alpha over
/// [1, max_support].
class PowerLawSampler {
public:
    PowerLawSampler(double alpha, uint64_t max_support);
    uint64_t sample(Rng& rng) const;

private:
    std::vector<double> cdf_;
};

} // namespace observatory
