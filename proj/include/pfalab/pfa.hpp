#ifndef PFALAB_PFA_HPP
#define PFALAB_PFA_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "pfalab/bytes.hpp"
#include "pfalab/sbox.hpp"

namespace pfalab {

/// Per-position counts of observed ciphertext byte values.
class CiphertextHistogram {
public:
    using Row = std::array<std::uint32_t, 256>;

    void add(const Block& ciphertext) noexcept
    {
        for (std::size_t j = 0; j < kBlockBytes; ++j)
            ++counts_[j][ciphertext[j]];
        ++n_;
    }

    void merge(const CiphertextHistogram& other) noexcept;

    std::uint32_t count(std::size_t position, Byte value) const noexcept { return counts_[position][value]; }
    const Row& row(std::size_t position) const noexcept { return counts_[position]; }
    std::uint64_t n() const noexcept { return n_; }

    /* CSV with header "position,value,count", 4096 data rows. */
    void write_csv(std::ostream& os) const;

    friend bool operator==(const CiphertextHistogram&, const CiphertextHistogram&) = default;

private:
    std::array<Row, kBlockBytes> counts_{};
    std::uint64_t n_ = 0;
};

CiphertextHistogram accumulate(std::span<const Block> ciphertexts);

enum class Confidence { Low, High };

/* Order statistics of one position's counts. */
struct PositionEvidence {
    Byte c_min = 0;
    Byte c_max = 0;
    std::uint32_t min_count = 0;
    std::uint32_t second_min_count = 0;
    std::uint32_t max_count = 0;
    std::uint32_t second_max_count = 0;
    bool min_unique = false;
    bool max_unique = false;
    Confidence confidence = Confidence::Low;
};

struct RecoveryOptions {
    /* High confidence needs the runner-up count to reach this. */
    std::uint32_t gap_threshold = 5;
};

struct KeyRecoveryResult {
    std::array<std::optional<Byte>, kBlockBytes> recovered{};
    std::array<std::vector<Byte>, kBlockBytes> candidate_sets{};
    std::array<PositionEvidence, kBlockBytes> evidence{};
    Byte v = 0;
    Byte v_star = 0;

    std::size_t recovered_count() const noexcept;
    bool complete() const noexcept { return recovered_count() == kBlockBytes; }
    /* Positions whose recovered byte equals `truth`. */
    std::size_t correct_count(const Block& truth) const noexcept;
    std::optional<Block> key() const;
};

/* {"k10": [int|null], "v": int, "v_star": int, "confidence": ["high"|"low"]} */
nlohmann::json to_json(const KeyRecoveryResult& result);

/// Max/min key recovery for the single-fault model, per position j:
///   k_min = c_min ^ S[v]     (the value never observed)
///   k_max = c_max ^ S[v*]    (the value observed twice as often)
/// A byte is recovered only when c_min was never observed (count 0), and
/// then either k_min == k_max or c_min is the unique zero. The candidate
/// set always holds both proposals. Ties pick the smallest value.
KeyRecoveryResult recover_key_maxmin(const CiphertextHistogram& hist, Byte v, Byte v_star,
                                     const SBoxTable& sbox, const RecoveryOptions& opts = {});

/// Survivors of k != c ^ S[v] for every value c observed at least
/// `threshold` times (a threshold below 1 is treated as 1).
std::array<std::vector<Byte>, kBlockBytes> eliminate_candidates(const CiphertextHistogram& hist, Byte v,
                                                                const SBoxTable& sbox,
                                                                std::uint32_t threshold = 1);

struct FaultHypothesis {
    Byte v = 0;
    Byte v_star = 0;
    int score = 0;
};

/// All (v, v*) hypotheses, v != v*, ranked by the number of positions where
/// c_min ^ S[v] == c_max ^ S[v*] (descending; ties by v, then v*).
/// The score depends on S[v] ^ S[v*] only, so the top class holds every
/// pair sharing that difference; `conclusive` needs a strict majority of
/// positions agreeing.
struct FaultSearchResult {
    std::vector<FaultHypothesis> ranked;
    bool conclusive = false;

    int top_score() const noexcept { return ranked.empty() ? 0 : ranked.front().score; }
    std::span<const FaultHypothesis> top_class() const noexcept;
};

FaultSearchResult search_fault_values(const CiphertextHistogram& hist, const SBoxTable& sbox);

struct ResolvedFault {
    FaultHypothesis hypothesis;
    Block round10_key{};
    Block master_key{};
};

/// Picks the member of the top class whose implied key and faulty table
/// reproduce one known (plaintext, ciphertext) pair from the faulted device.
std::optional<ResolvedFault> resolve_fault_hypotheses(const FaultSearchResult& search,
                                                      const CiphertextHistogram& hist,
                                                      const SBoxTable& sbox, const Block& known_plaintext,
                                                      const Block& known_ciphertext);

/// Smallest prefix length N whose histogram recovers all 16 bytes of
/// `true_round10_key` with recover_key_maxmin; nullopt if never reached.
/// With `skip_zero_blocks`, all-zero blocks count towards N but are kept
/// out of the histogram (ZCO-aware adversary).
std::optional<std::size_t> min_ciphertexts_to_recover(std::span<const Block> stream,
                                                      const Block& true_round10_key, Byte v, Byte v_star,
                                                      const SBoxTable& sbox, bool skip_zero_blocks = false);

/* 16 * log2(lambda); lambda >= 1. */
double estimate_residual_keyspace(unsigned lambda);

} // namespace pfalab

#endif
