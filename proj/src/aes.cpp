#include "pfalab/aes.hpp"

namespace pfalab {

namespace {

constexpr Byte kRcon[11] = {0x00, 0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36};

/* temp = SubWord(RotWord(w)) ^ Rcon, applied to the last word of a round key */
std::array<Byte, 4> schedule_core(const Block& prev, int round, const SBoxTable& sbox)
{
    return {static_cast<Byte>(sbox[prev[13]] ^ kRcon[round]), sbox[prev[14]], sbox[prev[15]],
            sbox[prev[12]]};
}

} // namespace

RoundKeys key_expand(const Block& master_key)
{
    static const SBoxTable sbox = SBoxTable::aes();
    RoundKeys rk;
    rk.keys[0] = master_key;
    for (int round = 1; round <= CipherOptions::kRounds; ++round) {
        const Block& prev = rk.keys[round - 1];
        Block& cur = rk.keys[round];
        auto temp = schedule_core(prev, round, sbox);
        for (int i = 0; i < 4; ++i)
            cur[i] = static_cast<Byte>(prev[i] ^ temp[i]);
        for (int i = 4; i < 16; ++i)
            cur[i] = static_cast<Byte>(prev[i] ^ cur[i - 4]);
    }
    return rk;
}

Block inverse_key_expand(const Block& round10_key)
{
    static const SBoxTable sbox = SBoxTable::aes();
    Block cur = round10_key;
    for (int round = CipherOptions::kRounds; round >= 1; --round) {
        Block prev{};
        // words 1..3 of the previous key: w[i-4] = w[i] ^ w[i-1]
        for (int i = 15; i >= 4; --i)
            prev[i] = static_cast<Byte>(cur[i] ^ cur[i - 4]);
        auto temp = schedule_core(prev, round, sbox);
        for (int i = 0; i < 4; ++i)
            prev[i] = static_cast<Byte>(cur[i] ^ temp[i]);
        cur = prev;
    }
    return cur;
}

Block sub_bytes_block(const Block& block, const SBoxTable& table)
{
    Block out{};
    for (std::size_t i = 0; i < kBlockBytes; ++i)
        out[i] = table[block[i]];
    return out;
}

Block encrypt(const Block& plaintext, const RoundKeys& keys, const SBoxTable& table,
              const CipherOptions& opts)
{
    return encrypt_with(plaintext, keys, [&table](Byte x) { return table[x]; }, opts);
}

Block decrypt(const Block& ciphertext, const RoundKeys& keys, const SBoxTable& inv_table,
              const CipherOptions& opts)
{
    Block s = ciphertext;
    detail::add_round_key(s, keys.last());
    if (opts.shift_rows)
        detail::inv_shift_rows(s);
    for (auto& b : s)
        b = inv_table[b];
    for (int round = CipherOptions::kRounds - 1; round >= 1; --round) {
        detail::add_round_key(s, keys[round]);
        detail::inv_mix_columns(s);
        if (opts.shift_rows)
            detail::inv_shift_rows(s);
        for (auto& b : s)
            b = inv_table[b];
    }
    detail::add_round_key(s, keys[0]);
    return s;
}

Block encrypt_traced(const Block& plaintext, const RoundKeys& keys, const SBoxTable& table,
                     std::bitset<256>& accessed, const CipherOptions& opts)
{
    return encrypt_with(
        plaintext, keys,
        [&](Byte x) {
            accessed.set(x);
            return table[x];
        },
        opts);
}

} // namespace pfalab
