#ifndef PFALAB_SBOX_HPP
#define PFALAB_SBOX_HPP

#include <array>
#include <span>

#include "pfalab/bytes.hpp"

namespace pfalab {

/// A 256-entry substitution table viewed as a 16x16 grid: row = high
/// nibble of the index, column = low nibble. Tables may be faulted, so
/// bijectivity is a query, never an assumption.
class SBoxTable {
public:
    using Entries = std::array<Byte, 256>;

    SBoxTable() = default;
    explicit SBoxTable(const Entries& entries) : entries_(entries) {}

    static SBoxTable aes();
    static SBoxTable aes_inverse();
    static SBoxTable identity();

    Byte operator[](Byte x) const noexcept { return entries_[x]; }
    void set(Byte x, Byte value) noexcept { entries_[x] = value; }

    const Entries& entries() const noexcept { return entries_; }

    bool is_permutation() const noexcept;

    /* Throws Error{NotAPermutation} on a non-bijective table. */
    SBoxTable inverse() const;

    friend bool operator==(const SBoxTable&, const SBoxTable&) = default;

private:
    Entries entries_{};
};

// Toroidal 4-neighborhood on the 16x16 grid.
constexpr Byte grid_index(unsigned row, unsigned col) noexcept
{
    return static_cast<Byte>(((row & 0xF) << 4) | (col & 0xF));
}
constexpr unsigned grid_row(Byte x) noexcept { return x >> 4; }
constexpr unsigned grid_col(Byte x) noexcept { return x & 0xF; }

constexpr Byte up(Byte x) noexcept { return grid_index(grid_row(x) + 15, grid_col(x)); }
constexpr Byte down(Byte x) noexcept { return grid_index(grid_row(x) + 1, grid_col(x)); }
constexpr Byte left(Byte x) noexcept { return grid_index(grid_row(x), grid_col(x) + 15); }
constexpr Byte right(Byte x) noexcept { return grid_index(grid_row(x), grid_col(x) + 1); }

constexpr std::array<Byte, 4> neighbors(Byte x) noexcept
{
    return {up(x), down(x), left(x), right(x)};
}

} // namespace pfalab

#endif
