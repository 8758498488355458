#pragma once

#include <cstdint>
#include <string_view>

namespace hcone {

// SplitMix64 stream. Streams are derived from a root seed and a name, so the
// same (seed, name) pair always yields the same sequence on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    Rng(std::uint64_t root_seed, std::string_view name);

    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Uniform on (0, 1), never returns 0.
    double uniform_open();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    std::uint64_t below(std::uint64_t n);

    Rng substream(std::string_view name) const;

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t fnv1a(std::string_view s);

}  // namespace hcone
