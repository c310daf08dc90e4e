#ifndef PFALAB_BYTES_HPP
#define PFALAB_BYTES_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pfalab {

using Byte = std::uint8_t;

/* 16-byte AES block / state, column-major: (row r, col c) at index 4*c + r */
using Block = std::array<Byte, 16>;

inline constexpr std::size_t kBlockBytes = 16;

/* Lowercase hex, two characters per byte */
std::string to_hex(std::span<const Byte> bytes);

/* Parses exactly 32 hex characters (either case). Throws Error{InvalidHex}. */
Block block_from_hex(std::string_view hex);

std::vector<Byte> bytes_from_hex(std::string_view hex);

inline Block xor_blocks(const Block& a, const Block& b)
{
    Block out{};
    for (std::size_t i = 0; i < kBlockBytes; ++i)
        out[i] = static_cast<Byte>(a[i] ^ b[i]);
    return out;
}

} // namespace pfalab

#endif
