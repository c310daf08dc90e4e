#ifndef PFALAB_AES_HPP
#define PFALAB_AES_HPP

#include <array>
#include <bitset>
#include <cstddef>

#include "pfalab/bytes.hpp"
#include "pfalab/sbox.hpp"

namespace pfalab {

/* k_0 .. k_10; k_0 is the master key */
struct RoundKeys {
    std::array<Block, 11> keys{};

    const Block& operator[](std::size_t round) const noexcept { return keys[round]; }
    const Block& last() const noexcept { return keys[10]; }
};

struct CipherOptions {
    static constexpr int kRounds = 10;

    /* false turns every ShiftRows (and InvShiftRows) into the identity */
    bool shift_rows = true;
};

/* Standard AES-128 schedule. Always uses the pristine S-box: faults are
   modeled on the encryption table only. */
RoundKeys key_expand(const Block& master_key);

/* Walks the schedule backwards from k_10 to k_0. */
Block inverse_key_expand(const Block& round10_key);

Block sub_bytes_block(const Block& block, const SBoxTable& table);

namespace detail {

inline Byte xtime(Byte b) noexcept
{
    return static_cast<Byte>((b << 1) ^ ((b & 0x80) ? 0x1B : 0x00));
}

inline Byte gmul(Byte a, Byte b) noexcept
{
    Byte p = 0;
    while (b) {
        if (b & 1)
            p ^= a;
        a = xtime(a);
        b >>= 1;
    }
    return p;
}

inline void add_round_key(Block& s, const Block& k) noexcept
{
    for (std::size_t i = 0; i < kBlockBytes; ++i)
        s[i] ^= k[i];
}

/* Row r rotates left by r. Output (r, c) <- input (r, c + r). */
inline void shift_rows(Block& s) noexcept
{
    Block t = s;
    for (int r = 1; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            s[4 * c + r] = t[4 * ((c + r) & 3) + r];
}

inline void inv_shift_rows(Block& s) noexcept
{
    Block t = s;
    for (int r = 1; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            s[4 * ((c + r) & 3) + r] = t[4 * c + r];
}

inline void mix_columns(Block& s) noexcept
{
    for (int c = 0; c < 4; ++c) {
        Byte* col = &s[4 * c];
        Byte a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
        Byte all = static_cast<Byte>(a0 ^ a1 ^ a2 ^ a3);
        col[0] = static_cast<Byte>(a0 ^ all ^ xtime(static_cast<Byte>(a0 ^ a1)));
        col[1] = static_cast<Byte>(a1 ^ all ^ xtime(static_cast<Byte>(a1 ^ a2)));
        col[2] = static_cast<Byte>(a2 ^ all ^ xtime(static_cast<Byte>(a2 ^ a3)));
        col[3] = static_cast<Byte>(a3 ^ all ^ xtime(static_cast<Byte>(a3 ^ a0)));
    }
}

inline void inv_mix_columns(Block& s) noexcept
{
    for (int c = 0; c < 4; ++c) {
        Byte* col = &s[4 * c];
        Byte a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
        col[0] = static_cast<Byte>(gmul(a0, 14) ^ gmul(a1, 11) ^ gmul(a2, 13) ^ gmul(a3, 9));
        col[1] = static_cast<Byte>(gmul(a0, 9) ^ gmul(a1, 14) ^ gmul(a2, 11) ^ gmul(a3, 13));
        col[2] = static_cast<Byte>(gmul(a0, 13) ^ gmul(a1, 9) ^ gmul(a2, 14) ^ gmul(a3, 11));
        col[3] = static_cast<Byte>(gmul(a0, 11) ^ gmul(a1, 13) ^ gmul(a2, 9) ^ gmul(a3, 14));
    }
}

template <class Lookup>
inline void sub_bytes(Block& s, Lookup& lookup)
{
    for (auto& b : s)
        b = lookup(b);
}

} // namespace detail

/// Runs rounds 1..10 up to and including the final SubBytes; the state
/// returned is what the last ShiftRows consumes. `lookup` is any callable
/// Byte -> Byte and replaces the S-box table in every SubBytes.
template <class Lookup>
Block encrypt_to_final_sub_bytes(const Block& plaintext, const RoundKeys& keys, Lookup&& lookup,
                                 const CipherOptions& opts = {})
{
    Block s = plaintext;
    detail::add_round_key(s, keys[0]);
    for (int round = 1; round < CipherOptions::kRounds; ++round) {
        detail::sub_bytes(s, lookup);
        if (opts.shift_rows)
            detail::shift_rows(s);
        detail::mix_columns(s);
        detail::add_round_key(s, keys[round]);
    }
    detail::sub_bytes(s, lookup);
    return s;
}

template <class Lookup>
Block encrypt_with(const Block& plaintext, const RoundKeys& keys, Lookup&& lookup,
                   const CipherOptions& opts = {})
{
    Block s = encrypt_to_final_sub_bytes(plaintext, keys, lookup, opts);
    if (opts.shift_rows)
        detail::shift_rows(s);
    detail::add_round_key(s, keys.last());
    return s;
}

Block encrypt(const Block& plaintext, const RoundKeys& keys, const SBoxTable& table,
              const CipherOptions& opts = {});

/* `inv_table` must be the inverse of the table used for encryption. */
Block decrypt(const Block& ciphertext, const RoundKeys& keys, const SBoxTable& inv_table,
              const CipherOptions& opts = {});

/* Instrumented encryption: records every table index read. */
Block encrypt_traced(const Block& plaintext, const RoundKeys& keys, const SBoxTable& table,
                     std::bitset<256>& accessed, const CipherOptions& opts = {});

} // namespace pfalab

#endif
