#include <doctest.h>

#include "pfalab/dc_guard.hpp"
#include "pfalab/fault.hpp"
#include "pfalab/rng.hpp"

using namespace pfalab;

namespace {

const SBoxAnalysis& analysis()
{
    static const SBoxAnalysis a = analyze_sbox(SBoxTable::aes());
    return a;
}

} // namespace

TEST_CASE("detect")
{
    const auto& a = analysis();
    const SBoxTable s = SBoxTable::aes();
    CHECK_FALSE(detect(s, a.pair));
    CHECK_FALSE(detect(s, a.pair, false));
    SBoxTable f = s;
    f.set(0x73, 0x00);
    CHECK(detect(f, a.pair));
}

TEST_CASE("reconstruct and vote on a single fault")
{
    const auto& a = analysis();
    const SBoxTable s = SBoxTable::aes();
    SBoxTable f = s;
    f.set(0x55, 0x00);
    const auto cands = reconstruct_candidates(f, a.tables, 0x55);
    for (Byte c : cands)
        CHECK(c == s[0x55]);
    CHECK(vote(cands, 0x00).value == s[0x55]);
    // a neighbor sees one bad candidate out of four
    const auto nb = reconstruct_candidates(f, a.tables, right(0x55));
    int good = 0;
    for (Byte c : nb)
        good += c == s[right(0x55)];
    CHECK(good == 3);
}

TEST_CASE("vote rules")
{
    CHECK(vote({1, 1, 1, 1}, 9).value == 1);
    CHECK(vote({1, 1, 1, 2}, 9).value == 1);
    CHECK(vote({1, 2, 1, 3}, 9).value == 1);
    CHECK(vote({1, 2, 1, 3}, 9).resolved);
    const auto split = vote({1, 2, 2, 1}, 9);
    CHECK_FALSE(split.resolved);
    CHECK(split.value == 9);
    CHECK_FALSE(vote({1, 2, 3, 4}, 9).resolved);
}

TEST_CASE("single fault correction is exact in one round")
{
    const auto& a = analysis();
    const SBoxTable s = SBoxTable::aes();
    Rng rng(1);
    for (int i = 0; i < 500; ++i) {
        const FaultSpec spec = random_faults(rng(), 1, Placement::Scattered, s);
        const auto [fixed, report] = correct(inject(s, spec), a.tables, a.pair);
        CHECK(fixed == s);
        CHECK(report.rounds_used == 1);
        CHECK(report.converged);
        REQUIRE(report.changed.size() == 1);
        CHECK(report.changed[0].index == spec.faults()[0].index);
        CHECK(report.changed[0].new_value == s[spec.faults()[0].index]);
    }
}

TEST_CASE("adjacent pair with a shared neighbor takes two rounds")
{
    const auto& a = analysis();
    const SBoxTable s = SBoxTable::aes();
    const FaultSpec spec({{0x00, 0x11}, {0x02, 0x22}}, s);
    CHECK(classify_case(spec) == FaultCase::Average);
    const auto [fixed, report] = correct(inject(s, spec), a.tables, a.pair);
    CHECK(fixed == s);
    CHECK(report.converged);
    CHECK(report.rounds_used <= 2);
}

TEST_CASE("round budget and single-entry scope")
{
    const auto& a = analysis();
    const SBoxTable s = SBoxTable::aes();
    const FaultSpec ring = random_faults(5, 8, Placement::Clustered, s);
    GuardConfig one;
    one.max_correction_rounds = 1;
    const auto [t1, r1] = correct(inject(s, ring), a.tables, a.pair, one);
    CHECK(r1.rounds_used <= 1);

    GuardConfig single;
    single.scope = CorrectionScope::SingleEntry;
    single.entries = {0x40};
    const auto [t2, r2] = correct(inject(s, FaultSpec({{0x40, 0x00}, {0x99, 0x01}}, s)), a.tables, a.pair, single);
    CHECK(t2[0x40] == s[0x40]);
    CHECK(t2[0x99] == 0x01);
    CHECK_FALSE(r2.converged); // the table is still faulty
}

TEST_CASE("guard writes corrections back")
{
    const auto& a = analysis();
    const SBoxTable s = SBoxTable::aes();
    DcGuard guard(inject(s, FaultSpec({{0x10, 0x00}}, s)), a.tables, a.pair);
    const RoundKeys keys = key_expand(Block{});
    const Block pt{};
    CHECK(guard.encrypt(pt, keys) == encrypt(pt, keys, s));
    CHECK(guard.table() == s);
    CHECK(guard.corrections_run() == 1);
    guard.encrypt(pt, keys);
    CHECK(guard.corrections_run() == 1);

    CorrectionReport rep;
    const Block c = dc_encrypt(pt, keys, inject(s, FaultSpec({{0x10, 0x00}}, s)), a.tables, a.pair, {}, &rep);
    CHECK(c == encrypt(pt, keys, s));
    CHECK(rep.rounds_used == 1);
    const auto j = to_json(rep);
    CHECK(j["changed"][0][0] == 0x10);
    CHECK(j["converged"] == true);
}

TEST_CASE("pre-correction lookup")
{
    const auto& a = analysis();
    const SBoxTable s = SBoxTable::aes();
    const SBoxTable f = inject(s, FaultSpec({{0x10, 0x00}}, s));
    for (unsigned x = 0; x < 256; ++x)
        CHECK(precorrect_lookup(f, a.tables, static_cast<Byte>(x)) == s[static_cast<Byte>(x)]);
    Rng rng(3);
    const RoundKeys keys = key_expand(rng.block());
    const Block pt = rng.block();
    CHECK(precorrect_encrypt(pt, keys, f, a.tables) == encrypt(pt, keys, s));
}

TEST_CASE("vote never invents a value")
{
    Rng rng(31);
    for (int i = 0; i < 20000; ++i) {
        std::array<Byte, 4> c{};
        for (auto& b : c)
            b = static_cast<Byte>(rng.below(4)); // small alphabet to hit every tie shape
        const Byte current = static_cast<Byte>(rng.below(8));
        const auto r = vote(c, current);
        const bool known = r.value == current || std::find(c.begin(), c.end(), r.value) != c.end();
        CHECK(known);
        if (!r.resolved)
            CHECK(r.value == current);
    }
}

TEST_CASE("pre-correction survives a fault at any neighbor")
{
    const auto& a = analysis();
    const SBoxTable s = SBoxTable::aes();
    std::size_t wrong = 0;
    for (unsigned x = 0; x < 256; ++x)
        for (unsigned e = 0; e < 256; ++e) {
            const auto bx = static_cast<Byte>(x);
            if (e == s[bx])
                continue;
            SBoxTable f = s;
            f.set(bx, static_cast<Byte>(e));
            wrong += precorrect_lookup(f, a.tables, bx) != s[bx];
            for (Byte n : neighbors(bx))
                wrong += precorrect_lookup(f, a.tables, n) != s[n];
        }
    CHECK(wrong == 0);
}

TEST_CASE("pre-correction equals pristine encryption under best-case faults")
{
    const auto& a = analysis();
    const SBoxTable s = SBoxTable::aes();
    Rng rng(32);
    const RoundKeys keys = key_expand(rng.block());
    std::vector<Block> pts(1000);
    std::vector<Block> refs(1000);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        pts[i] = rng.block();
        refs[i] = encrypt(pts[i], keys, s);
    }
    std::size_t mismatches = 0;
    for (std::uint64_t spec = 0; spec < 100; ++spec) {
        const SBoxTable f = inject(s, random_faults(spec, 1 + spec % 6, Placement::Scattered, s));
        for (std::size_t i = 0; i < pts.size(); ++i)
            mismatches += precorrect_encrypt(pts[i], keys, f, a.tables) != refs[i];
    }
    CHECK(mismatches == 0);
}

TEST_CASE("faulty entries never multiply across rounds for best and average cases")
{
    const auto& a = analysis();
    const SBoxTable s = SBoxTable::aes();
    auto faulty = [&](const SBoxTable& t) {
        int n = 0;
        for (unsigned x = 0; x < 256; ++x)
            n += t[static_cast<Byte>(x)] != s[static_cast<Byte>(x)];
        return n;
    };
    GuardConfig one;
    one.max_correction_rounds = 1;
    Rng rng(33);
    int violations = 0;
    for (int i = 0; i < 500; ++i) {
        const Byte e0 = rng.byte(), e2 = rng.byte();
        if (i % 2 == 0 && (e0 == s[0x00] || e2 == s[0x02]))
            continue;
        // odd: scattered best case; even: a pair sharing the neighbor 0x01
        const FaultSpec spec = i % 2 ? random_faults(rng(), 2 + static_cast<unsigned>(rng.below(4)), Placement::Scattered, s)
                                     : FaultSpec({{0x00, e0}, {0x02, e2}}, s);
        SBoxTable t = inject(s, spec);
        for (int round = 0; round < 4; ++round) {
            const int before = faulty(t);
            t = correct(t, a.tables, a.pair, one).first;
            violations += faulty(t) > before;
        }
    }
    CHECK(violations == 0);
}
