#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace slokit {

using Hash256 = std::array<std::uint8_t, 32>;

inline constexpr Hash256 kZeroHash{};

std::string hex_encode(const std::uint8_t* data, std::size_t len);
std::string hex_encode(const Hash256& h);
std::optional<Hash256> hex_decode32(std::string_view hex);

Hash256 sha256(std::string_view bytes);

/// Builder for hash preimages. Variable-length fields are length-prefixed
/// (u64 little-endian) so field boundaries stay unambiguous; fixed-width
/// fields are appended raw. Byte layouts are documented in docs/formats.md.
class Preimage {
public:
    Preimage& field(std::string_view bytes);
    Preimage& u64(std::uint64_t v);
    Preimage& i64(std::int64_t v);
    Preimage& raw(const Hash256& h);

    const std::string& bytes() const { return buf_; }
    Hash256 hash() const { return sha256(buf_); }

private:
    std::string buf_;
};

} // namespace slokit
