#include "pfalab/pfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pfalab/aes.hpp"
#include "pfalab/error.hpp"

namespace pfalab {

namespace {

bool is_zero_block(const Block& b)
{
    return std::all_of(b.begin(), b.end(), [](Byte x) { return x == 0; });
}

PositionEvidence position_evidence(const CiphertextHistogram::Row& row, std::uint32_t gap_threshold)
{
    PositionEvidence e;
    e.min_count = std::numeric_limits<std::uint32_t>::max();
    e.second_min_count = std::numeric_limits<std::uint32_t>::max();
    int min_ties = 0, max_ties = 0;
    for (unsigned x = 0; x < 256; ++x) {
        const auto n = row[x];
        if (n < e.min_count) {
            e.second_min_count = e.min_count;
            e.min_count = n;
            e.c_min = static_cast<Byte>(x);
            min_ties = 1;
        } else {
            if (n == e.min_count)
                ++min_ties;
            e.second_min_count = std::min(e.second_min_count, n);
        }
        if (x == 0 || n > e.max_count) {
            e.second_max_count = x == 0 ? 0 : e.max_count;
            e.max_count = n;
            e.c_max = static_cast<Byte>(x);
            max_ties = 1;
        } else {
            if (n == e.max_count)
                ++max_ties;
            e.second_max_count = std::max(e.second_max_count, n);
        }
    }
    e.min_unique = min_ties == 1;
    e.max_unique = max_ties == 1;
    e.confidence = e.min_count == 0 && e.min_unique && e.second_min_count >= gap_threshold
                       ? Confidence::High
                       : Confidence::Low;
    return e;
}

struct PositionDecision {
    std::optional<Byte> key;
    Byte k_min = 0;
    Byte k_max = 0;
};

PositionDecision decide(const PositionEvidence& e, Byte s_v, Byte s_vstar)
{
    PositionDecision d;
    d.k_min = static_cast<Byte>(e.c_min ^ s_v);
    d.k_max = static_cast<Byte>(e.c_max ^ s_vstar);
    if (e.min_count == 0 && (d.k_min == d.k_max || e.min_unique))
        d.key = d.k_min;
    return d;
}

} // namespace

void CiphertextHistogram::merge(const CiphertextHistogram& other) noexcept
{
    for (std::size_t j = 0; j < kBlockBytes; ++j)
        for (unsigned x = 0; x < 256; ++x)
            counts_[j][x] += other.counts_[j][x];
    n_ += other.n_;
}

void CiphertextHistogram::write_csv(std::ostream& os) const
{
    os << "position,value,count\n";
    for (std::size_t j = 0; j < kBlockBytes; ++j)
        for (unsigned x = 0; x < 256; ++x)
            os << j << ',' << x << ',' << counts_[j][x] << '\n';
}

CiphertextHistogram accumulate(std::span<const Block> ciphertexts)
{
    CiphertextHistogram h;
    for (const auto& c : ciphertexts)
        h.add(c);
    return h;
}

std::size_t KeyRecoveryResult::recovered_count() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(recovered.begin(), recovered.end(), [](const auto& k) { return k.has_value(); }));
}

std::size_t KeyRecoveryResult::correct_count(const Block& truth) const noexcept
{
    std::size_t n = 0;
    for (std::size_t j = 0; j < kBlockBytes; ++j)
        n += recovered[j] && *recovered[j] == truth[j] ? 1 : 0;
    return n;
}

std::optional<Block> KeyRecoveryResult::key() const
{
    if (!complete())
        return std::nullopt;
    Block k{};
    for (std::size_t j = 0; j < kBlockBytes; ++j)
        k[j] = *recovered[j];
    return k;
}

nlohmann::json to_json(const KeyRecoveryResult& result)
{
    nlohmann::json k10 = nlohmann::json::array();
    nlohmann::json confidence = nlohmann::json::array();
    for (std::size_t j = 0; j < kBlockBytes; ++j) {
        if (result.recovered[j])
            k10.push_back(static_cast<int>(*result.recovered[j]));
        else
            k10.push_back(nullptr);
        confidence.push_back(result.evidence[j].confidence == Confidence::High ? "high" : "low");
    }
    return {{"k10", std::move(k10)},
            {"v", static_cast<int>(result.v)},
            {"v_star", static_cast<int>(result.v_star)},
            {"confidence", std::move(confidence)}};
}

KeyRecoveryResult recover_key_maxmin(const CiphertextHistogram& hist, Byte v, Byte v_star,
                                     const SBoxTable& sbox, const RecoveryOptions& opts)
{
    KeyRecoveryResult out;
    out.v = v;
    out.v_star = v_star;
    for (std::size_t j = 0; j < kBlockBytes; ++j) {
        out.evidence[j] = position_evidence(hist.row(j), opts.gap_threshold);
        const auto d = decide(out.evidence[j], sbox[v], sbox[v_star]);
        out.recovered[j] = d.key;
        out.candidate_sets[j].push_back(d.k_min);
        if (d.k_max != d.k_min)
            out.candidate_sets[j].push_back(d.k_max);
        std::sort(out.candidate_sets[j].begin(), out.candidate_sets[j].end());
    }
    return out;
}

std::array<std::vector<Byte>, kBlockBytes> eliminate_candidates(const CiphertextHistogram& hist, Byte v,
                                                                const SBoxTable& sbox, std::uint32_t threshold)
{
    threshold = std::max<std::uint32_t>(threshold, 1);
    std::array<std::vector<Byte>, kBlockBytes> out;
    for (std::size_t j = 0; j < kBlockBytes; ++j) {
        std::array<bool, 256> alive;
        alive.fill(true);
        for (unsigned c = 0; c < 256; ++c)
            if (hist.count(j, static_cast<Byte>(c)) >= threshold)
                alive[c ^ sbox[v]] = false;
        for (unsigned k = 0; k < 256; ++k)
            if (alive[k])
                out[j].push_back(static_cast<Byte>(k));
    }
    return out;
}

std::span<const FaultHypothesis> FaultSearchResult::top_class() const noexcept
{
    std::size_t n = 0;
    while (n < ranked.size() && ranked[n].score == top_score())
        ++n;
    return {ranked.data(), n};
}

FaultSearchResult search_fault_values(const CiphertextHistogram& hist, const SBoxTable& sbox)
{
    std::array<int, 256> by_delta{};
    for (std::size_t j = 0; j < kBlockBytes; ++j) {
        const auto e = position_evidence(hist.row(j), 0);
        ++by_delta[e.c_min ^ e.c_max];
    }

    FaultSearchResult out;
    out.ranked.reserve(256 * 255);
    for (unsigned v = 0; v < 256; ++v)
        for (unsigned vs = 0; vs < 256; ++vs) {
            if (v == vs)
                continue;
            const auto delta = sbox[static_cast<Byte>(v)] ^ sbox[static_cast<Byte>(vs)];
            out.ranked.push_back({static_cast<Byte>(v), static_cast<Byte>(vs), by_delta[delta]});
        }
    std::stable_sort(out.ranked.begin(), out.ranked.end(),
                     [](const FaultHypothesis& a, const FaultHypothesis& b) { return a.score > b.score; });
    out.conclusive = out.top_score() > static_cast<int>(kBlockBytes / 2);
    return out;
}

std::optional<ResolvedFault> resolve_fault_hypotheses(const FaultSearchResult& search,
                                                      const CiphertextHistogram& hist,
                                                      const SBoxTable& sbox, const Block& known_plaintext,
                                                      const Block& known_ciphertext)
{
    for (const auto& h : search.top_class()) {
        const auto rec = recover_key_maxmin(hist, h.v, h.v_star, sbox);
        const auto k10 = rec.key();
        if (!k10)
            continue;
        SBoxTable faulty = sbox;
        faulty.set(h.v, sbox[h.v_star]);
        const Block master = inverse_key_expand(*k10);
        if (encrypt(known_plaintext, key_expand(master), faulty) == known_ciphertext)
            return ResolvedFault{h, *k10, master};
    }
    return std::nullopt;
}

std::optional<std::size_t> min_ciphertexts_to_recover(std::span<const Block> stream,
                                                      const Block& true_round10_key, Byte v, Byte v_star,
                                                      const SBoxTable& sbox, bool skip_zero_blocks)
{
    CiphertextHistogram hist;
    const Byte s_v = sbox[v];
    const Byte s_vstar = sbox[v_star];
    for (std::size_t i = 0; i < stream.size(); ++i) {
        if (skip_zero_blocks && is_zero_block(stream[i]))
            continue;
        hist.add(stream[i]);
        bool all = true;
        for (std::size_t j = 0; j < kBlockBytes && all; ++j) {
            const auto d = decide(position_evidence(hist.row(j), 0), s_v, s_vstar);
            all = d.key && *d.key == true_round10_key[j];
        }
        if (all)
            return i + 1;
    }
    return std::nullopt;
}

double estimate_residual_keyspace(unsigned lambda)
{
    if (lambda < 1)
        throw Error(ErrorKind::Config, "fault count must be at least 1");
    return 16.0 * std::log2(static_cast<double>(lambda));
}

} // namespace pfalab
