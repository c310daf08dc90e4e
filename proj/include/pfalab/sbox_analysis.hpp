#ifndef PFALAB_SBOX_ANALYSIS_HPP
#define PFALAB_SBOX_ANALYSIS_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "pfalab/bytes.hpp"
#include "pfalab/sbox.hpp"

namespace pfalab {

/// Orbits of a bijective table. Each cycle starts at its smallest member
/// and lists the successive images; cycles are sorted by that first member.
struct CycleDecomposition {
    std::vector<std::vector<Byte>> cycles;

    std::size_t count() const noexcept { return cycles.size(); }
    std::vector<std::size_t> lengths() const;
};

/// Seeds per cycle (d_i), per-cycle iteration counts r_i = ceil(l_i / d_i)
/// and the bound t = max r_i.
struct SeedAllocation {
    std::vector<int> seeds;
    std::vector<int> iterations;
    int t = 0;

    int total_seeds() const noexcept;
};

/// Fixed input P with its checkpoints after t (C) and t + 1 (C-hat)
/// SubBytes iterations over the pristine table.
struct DetectionPair {
    Block p{};
    Block c{};
    Block c_hat{};
    int t = 0;
};

/// Condensed neighbor-XOR tables: h[x] = S[x] ^ S[right(x)],
/// v[x] = S[x] ^ S[down(x)] with toroidal wrap.
struct RedundantTables {
    std::array<Byte, 256> h{};
    std::array<Byte, 256> v{};
};

/* Throws Error{NotAPermutation}. */
CycleDecomposition cycle_decompose(const SBoxTable& table);

/// Integer allocation of `block_width` seeds over cycles of the given
/// lengths minimizing t; ties go to the smaller sum of r_i, then to the
/// lexicographically smallest seed vector. Throws Error{Infeasible} when
/// there are more cycles than seeds.
SeedAllocation allocate_seeds(std::span<const std::size_t> lengths, int block_width = 16);

/* Throws Error{AllocationMismatch} if alloc does not fit the table's cycles
   or does not sum to the block width. */
DetectionPair build_detection_pair(const SBoxTable& table, const SeedAllocation& alloc);

RedundantTables build_redundant_tables(const SBoxTable& table);

/* Everything the offline analysis produces for one pristine table. */
struct SBoxAnalysis {
    CycleDecomposition cycles;
    SeedAllocation allocation;
    DetectionPair pair;
    RedundantTables tables;
};

SBoxAnalysis analyze_sbox(const SBoxTable& table);

/* {"cycles","d","t","p","c","c_hat","h_table","v_table"} */
nlohmann::json to_json(const SBoxAnalysis& analysis);

} // namespace pfalab

#endif
