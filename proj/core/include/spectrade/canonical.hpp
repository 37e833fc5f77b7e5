#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>
#include <vector>

#include "spectrade/hash.hpp"

namespace spectrade {

// Canonical byte encoding used for every digest preimage in the system:
// fixed-width integers big-endian, variable-length fields length-prefixed,
// fields appended in declaration order. Keeps chains bit-identical across
// builds and platforms.
class CanonicalWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }

    void u32(std::uint32_t v) {
        for (int i = 3; i >= 0; --i) buf_.push_back(std::uint8_t(v >> (8 * i)));
    }

    void u64(std::uint64_t v) {
        for (int i = 7; i >= 0; --i) buf_.push_back(std::uint8_t(v >> (8 * i)));
    }

    // IEEE-754 bit pattern, big-endian.
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        u64(bits);
    }

    void bytes(std::span<const std::uint8_t> data) {
        u32(std::uint32_t(data.size()));
        buf_.insert(buf_.end(), data.begin(), data.end());
    }

    void str(std::string_view s) {
        bytes(std::span<const std::uint8_t>(
            reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
    }

    // Fixed 32-byte field, no length prefix.
    void digest(const Digest& d) { buf_.insert(buf_.end(), d.begin(), d.end()); }

    std::span<const std::uint8_t> view() const { return buf_; }

    Digest hash() const { return Sha256::digest(view()); }

private:
    std::vector<std::uint8_t> buf_;
};

} // namespace spectrade
