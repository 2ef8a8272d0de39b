#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gevreg {

// splitmix64; used to derive independent sub-stream seeds from one user seed.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return mix_seed(base + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

// Deterministic RNG. mt19937_64 output is pinned by the standard; all
// transforms below are hand-rolled so results do not depend on the
// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    // uniform on [0, 1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1]
    double uniform_pos() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller, one value per call
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    int bernoulli(double p) { return uniform01() < p ? 1 : 0; }

    // unbiased integer in [0, n) via rejection
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace gevreg
