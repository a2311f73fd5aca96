#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace deepspread {

using Rng = std::mt19937_64;

/// FNV-1a 64-bit hash. Stable across platforms and runs; used for manifest
/// file digests and sub-seed derivation.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Derive a deterministic per-purpose seed from a global seed and a label
/// (e.g. "pretrain.layer1.gibbs"). One global seed in the config fans out to
/// independent streams without manual bookkeeping.
constexpr std::uint64_t derive_subseed(std::uint64_t seed, std::string_view label) {
    std::uint64_t h = fnv1a64(label);
    // splitmix64 finalizer over the combined value
    std::uint64_t z = seed ^ (h + 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::string_view label) {
    return Rng(derive_subseed(seed, label));
}

}  // namespace deepspread
