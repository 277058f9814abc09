#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mssc {

// FNV-1a, used for the trace digests. Stable across platforms by
// construction (explicit byte order, fixed-width types).
class Fnv1a64 {
public:
    Fnv1a64& byte(std::uint8_t b) {
        hash_ ^= b;
        hash_ *= 0x100000001B3ULL;
        return *this;
    }

    Fnv1a64& u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) byte(static_cast<std::uint8_t>(v >> (8 * i)));
        return *this;
    }

    Fnv1a64& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
    Fnv1a64& i32(std::int32_t v) { return u64(static_cast<std::uint64_t>(static_cast<std::uint32_t>(v))); }

    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

std::string to_hex(std::uint64_t v);
std::uint64_t from_hex(const std::string& s);

}  // namespace mssc
