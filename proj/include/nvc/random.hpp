#pragma once

#include <cstdint>
#include <initializer_list>

namespace nvc {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent stream seed for a (base, coordinates...) cell.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> coords) noexcept {
    std::uint64_t s = mix64(base);
    for (auto c : coords) {
        s = mix64(s ^ mix64(c + 0x632BE59BD9B4E019ULL));
    }
    return s;
}

} // namespace nvc
