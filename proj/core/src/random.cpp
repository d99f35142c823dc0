#include "gradecast/random.hpp"

namespace gradecast {

std::uint64_t SplitMix64::below(std::uint64_t bound) noexcept {
    // Reject the top sliver so every residue is equally likely.
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    SplitMix64 rng(seed);
    shuffle(std::span<std::size_t>(idx), rng);
    return idx;
}

}  // namespace gradecast
