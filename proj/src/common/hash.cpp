#include "slokit/common/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace slokit {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
} // namespace

std::string hex_encode(const std::uint8_t* data, std::size_t len) {
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(kHexDigits[data[i] >> 4]);
        out.push_back(kHexDigits[data[i] & 0xf]);
    }
    return out;
}

std::string hex_encode(const Hash256& h) { return hex_encode(h.data(), h.size()); }

std::optional<Hash256> hex_decode32(std::string_view hex) {
    if (hex.size() != 64) return std::nullopt;
    Hash256 out{};
    for (std::size_t i = 0; i < 32; ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

Hash256 sha256(std::string_view bytes) {
    Hash256 out{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw std::runtime_error("sha256: digest failure");
    }
    return out;
}

Preimage& Preimage::field(std::string_view bytes) {
    u64(bytes.size());
    buf_.append(bytes.data(), bytes.size());
    return *this;
}

Preimage& Preimage::u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    return *this;
}

Preimage& Preimage::i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }

Preimage& Preimage::raw(const Hash256& h) {
    buf_.append(reinterpret_cast<const char*>(h.data()), h.size());
    return *this;
}

} // namespace slokit
