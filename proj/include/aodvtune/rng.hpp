#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace aodvtune {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Order-sensitive combination of words into one seed.
constexpr std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto w : words) h = splitmix64(h ^ splitmix64(w));
    return h;
}

enum class StreamPurpose : std::uint64_t {
    initialization = 1,
    mutation = 2,
    crossover = 3,
    channel = 4,
    mobility = 5,
    traffic = 6,
};

// Independent random stream. Streams are keyed by name, never shared between
// workers, so results do not depend on scheduling.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    static Stream named(std::uint64_t base_seed, StreamPurpose purpose,
                        std::uint64_t a = 0, std::uint64_t b = 0) {
        return Stream(mix_seed({base_seed, static_cast<std::uint64_t>(purpose), a, b}));
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }
    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace aodvtune
