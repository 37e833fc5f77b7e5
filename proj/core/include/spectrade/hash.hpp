#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spectrade {

using Digest = std::array<std::uint8_t, 32>;

// Incremental SHA-256. Self-contained so chains hash identically everywhere.
class Sha256 {
public:
    Sha256();
    void update(std::span<const std::uint8_t> data);
    void update(std::string_view text);
    Digest finish();

    static Digest digest(std::span<const std::uint8_t> data);
    static Digest digest(std::string_view text);

private:
    void process_block(const std::uint8_t* block);

    std::array<std::uint32_t, 8> state_;
    std::array<std::uint8_t, 64> buffer_;
    std::uint64_t total_bytes_;
    std::size_t buffered_;
};

std::string to_hex(std::span<const std::uint8_t> bytes);
std::string to_hex(const Digest& d);
std::optional<std::vector<std::uint8_t>> bytes_from_hex(std::string_view hex);
std::optional<Digest> digest_from_hex(std::string_view hex);

// Number of leading zero bits of the digest, reading byte 0 first.
int leading_zero_bits(const Digest& d);

// Keyed digest: H(key || message). Stands in for a signature in this simulation.
Digest keyed_digest(const Digest& key, std::span<const std::uint8_t> message);

} // namespace spectrade
