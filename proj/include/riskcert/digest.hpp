#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace riskcert {

// FNV-1a, 64-bit. Fingerprints loss inputs for certificate provenance.
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = kFnvOffset) noexcept {
    for (unsigned char b : bytes) {
        h ^= b;
        h *= kFnvPrime;
    }
    return h;
}

} // namespace riskcert
