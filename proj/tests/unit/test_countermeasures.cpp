#include <doctest.h>

#include "oracle.hpp"
#include "pfalab/countermeasures.hpp"
#include "pfalab/error.hpp"
#include "pfalab/fault.hpp"

using namespace pfalab;

namespace {

const Block kKey = block_from_hex("000102030405060708090a0b0c0d0e0f");

} // namespace

TEST_CASE("DMR passes clean encryptions through")
{
    const SBoxTable s = SBoxTable::aes();
    const RoundKeys keys = key_expand(kKey);
    Rng rng(1);
    for (auto mode : {DmrMode::Redundant, DmrMode::InverseDecrypt}) {
        const DmrConfig cfg{mode, DmrDefense::ZeroOutput, FaultScope::ModuleOneOnly};
        const Block pt = block_from_hex("00112233445566778899aabbccddeeff");
        const auto out = dmr_encrypt(pt, keys, s, s, cfg, rng);
        CHECK_FALSE(out.mismatch);
        REQUIRE(out.ciphertext);
        CHECK(to_hex(*out.ciphertext) == "69c4e0d86a7b0430d8cdb78070b4c55a");
    }
}

TEST_CASE("DMR defenses on a faulted module")
{
    const SBoxTable s = SBoxTable::aes();
    const SBoxTable f = inject(s, FaultSpec({{0x00, 0x00}}, s));
    const RoundKeys keys = key_expand(kKey);
    Rng plaintexts(2);

    int fired = 0;
    for (int i = 0; i < 300; ++i) {
        const Block pt = plaintexts.block();
        std::bitset<256> seen;
        encrypt_traced(pt, keys, s, seen);
        const Block faulty = encrypt(pt, keys, f);
        const bool differs = faulty != encrypt(pt, keys, s);
        CHECK(differs == seen.test(0x00)); // reading the faulty entry always changes the output here

        for (auto mode : {DmrMode::Redundant, DmrMode::InverseDecrypt}) {
            Rng rng(3);
            const auto zco = dmr_encrypt(pt, keys, s, f, {mode, DmrDefense::ZeroOutput, FaultScope::ModuleOneOnly}, rng);
            const auto nco = dmr_encrypt(pt, keys, s, f, {mode, DmrDefense::NoOutput, FaultScope::ModuleOneOnly}, rng);
            const auto rco = dmr_encrypt(pt, keys, s, f, {mode, DmrDefense::RandomOutput, FaultScope::ModuleOneOnly}, rng);
            CHECK(zco.mismatch == differs);
            if (differs) {
                CHECK(*zco.ciphertext == Block{});
                CHECK(nco.status == OutputStatus::Suppressed);
                CHECK_FALSE(nco.ciphertext);
                REQUIRE(rco.ciphertext);
                CHECK(*rco.ciphertext != faulty);
            } else {
                CHECK(*zco.ciphertext == faulty);
                CHECK(*nco.ciphertext == faulty);
            }
        }
        // both modules read the same faulty table: nothing to compare against
        Rng rng(4);
        const auto shared = dmr_encrypt(pt, keys, s, f, {DmrMode::Redundant, DmrDefense::ZeroOutput, FaultScope::Shared}, rng);
        CHECK_FALSE(shared.mismatch);
        CHECK(*shared.ciphertext == faulty);
        fired += differs;
    }
    CHECK(fired > 0);
    CHECK(fired < 300);
}

TEST_CASE("DMR option strings")
{
    CHECK(dmr_mode_from_string("iddmr") == DmrMode::InverseDecrypt);
    CHECK(dmr_defense_from_string("nco") == DmrDefense::NoOutput);
    CHECK(fault_scope_from_string("shared") == FaultScope::Shared);
    CHECK_THROWS_AS(dmr_defense_from_string("xyz"), Error);
}

TEST_CASE("bytes scrambling without faults equals AES")
{
    const SBoxTable s = SBoxTable::aes();
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const RoundKeys keys = key_expand(rng.block());
        const Block pt = rng.block();
        const auto both = bs_encrypt_both(pt, keys, s, s);
        CHECK(both.a == encrypt(pt, keys, s));
        CHECK(both.b == both.a);
    }
}

TEST_CASE("bytes scrambling crossover pattern")
{
    CHECK(bs_source_path(BsPath::B, 0, 0) == BsPath::A);
    CHECK(bs_source_path(BsPath::B, 0, 1) == BsPath::B);
    CHECK(bs_source_path(BsPath::A, 1, 1) == BsPath::B);

    // a transient fault on path B surfaces in A at crossing bytes, in B otherwise
    const SBoxTable s = SBoxTable::aes();
    const RoundKeys keys = key_expand(kKey);
    const Block pt{};
    const auto clean = bs_encrypt_both(pt, keys, s, s);
    for (int pos = 0; pos < 16; ++pos) {
        const auto hit = bs_encrypt_both(pt, keys, s, s, TransientFault{pos, 0x01});
        int diff_a = 0, diff_b = 0;
        for (int i = 0; i < 16; ++i) {
            diff_a += hit.a[i] != clean.a[i];
            diff_b += hit.b[i] != clean.b[i];
        }
        CHECK(diff_a + diff_b == 1);
    }
}

TEST_CASE("bytes scrambling with a shared persistent fault equals the faulty cipher")
{
    const SBoxTable s = SBoxTable::aes();
    const SBoxTable f = inject(s, FaultSpec({{0x42, 0x00}}, s));
    Rng rng(6);
    for (int i = 0; i < 100; ++i) {
        const Block key = rng.block();
        const Block pt = rng.block();
        oracle::Table t{};
        for (unsigned x = 0; x < 256; ++x)
            t[x] = f[static_cast<Byte>(x)];
        CHECK(bs_encrypt(pt, key_expand(key), f, f) == oracle::encrypt(key, pt, t));
    }
}

TEST_CASE("pristine DMR and BS equal plain AES on 1000 random cases")
{
    const SBoxTable s = SBoxTable::aes();
    Rng rng(21);
    for (int i = 0; i < 1000; ++i) {
        const RoundKeys keys = key_expand(rng.block());
        const Block pt = rng.block();
        const Block ref = encrypt(pt, keys, s);
        CHECK(bs_encrypt(pt, keys, s, s) == ref);
        const auto mode = i % 2 ? DmrMode::Redundant : DmrMode::InverseDecrypt;
        const auto out = dmr_encrypt(pt, keys, s, s, {mode, DmrDefense::RandomOutput, FaultScope::ModuleOneOnly}, rng);
        CHECK(*out.ciphertext == ref);
    }
}

TEST_CASE("a transient fault on B's first byte leaves B's output correct")
{
    const SBoxTable s = SBoxTable::aes();
    Rng rng(22);
    for (int i = 0; i < 50; ++i) {
        const RoundKeys keys = key_expand(rng.block());
        const Block pt = rng.block();
        const auto hit = bs_encrypt_both(pt, keys, s, s, TransientFault{0, static_cast<Byte>(1 + rng.below(255))});
        CHECK(hit.b == encrypt(pt, keys, s));
        CHECK(hit.a != hit.b);
    }
}

TEST_CASE("crossing pattern is an involution")
{
    for (auto dest : {BsPath::A, BsPath::B})
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                const BsPath src = bs_source_path(dest, r, c);
                // the byte that left `dest` for the other path comes back by the same rule
                CHECK(bs_source_path(src, r, c) == dest);
            }
}
