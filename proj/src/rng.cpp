#include "esgport/rng.hpp"

namespace esgport {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) noexcept {
    std::uint64_t h = basis;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> names) noexcept {
    std::uint64_t state = splitmix64(master);
    for (std::string_view name : names) {
        // length prefix keeps {"ab","c"} distinct from {"a","bc"}
        state = splitmix64(state ^ fnv1a64(name) ^ (static_cast<std::uint64_t>(name.size()) << 56));
    }
    return state;
}

}  // namespace esgport
