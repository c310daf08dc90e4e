#include "pfalab/bytes.hpp"

#include <algorithm>

#include "pfalab/error.hpp"

namespace pfalab {

namespace {

int nibble(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

} // namespace

std::string to_hex(std::span<const Byte> bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (Byte b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

std::vector<Byte> bytes_from_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0)
        throw Error(ErrorKind::InvalidHex, "odd number of hex digits");
    std::vector<Byte> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw Error(ErrorKind::InvalidHex, "non-hex character in '" + std::string(hex) + "'");
        out[i] = static_cast<Byte>((hi << 4) | lo);
    }
    return out;
}

Block block_from_hex(std::string_view hex)
{
    if (hex.size() != 2 * kBlockBytes)
        throw Error(ErrorKind::InvalidHex,
                    "expected 32 hex characters, got " + std::to_string(hex.size()));
    auto bytes = bytes_from_hex(hex);
    Block out{};
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return out;
}

} // namespace pfalab
