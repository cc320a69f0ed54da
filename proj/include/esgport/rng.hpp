#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace esgport {

using Rng = std::mt19937_64;

/// 64-bit FNV-1a over raw bytes. Used for content hashes in run manifests.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/**
 * Named substream seed: derive_seed(master, {"window", "3", "strategy", "Asset4"}).
 *
 * The result depends only on the master seed and the ordered names, so adding a
 * new strategy or window never shifts the draws of existing ones.
 */
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> names) noexcept;

}  // namespace esgport
