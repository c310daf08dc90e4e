#include "pfalab/sbox_analysis.hpp"

#include <algorithm>
#include <bitset>
#include <limits>
#include <numeric>
#include <string>

#include "pfalab/aes.hpp"
#include "pfalab/error.hpp"

namespace pfalab {

namespace {

int ceil_div(std::size_t num, int den)
{
    return static_cast<int>((num + static_cast<std::size_t>(den) - 1) / static_cast<std::size_t>(den));
}

} // namespace

std::vector<std::size_t> CycleDecomposition::lengths() const
{
    std::vector<std::size_t> out;
    out.reserve(cycles.size());
    for (const auto& c : cycles)
        out.push_back(c.size());
    return out;
}

int SeedAllocation::total_seeds() const noexcept
{
    return std::accumulate(seeds.begin(), seeds.end(), 0);
}

CycleDecomposition cycle_decompose(const SBoxTable& table)
{
    if (!table.is_permutation())
        throw Error(ErrorKind::NotAPermutation, "cycle decomposition needs a bijective table");

    CycleDecomposition out;
    std::bitset<256> visited;
    for (unsigned start = 0; start < 256; ++start) {
        if (visited.test(start))
            continue;
        std::vector<Byte> cycle;
        for (unsigned x = start; !visited.test(x); x = table[static_cast<Byte>(x)]) {
            visited.set(x);
            cycle.push_back(static_cast<Byte>(x));
        }
        out.cycles.push_back(std::move(cycle));
    }
    return out;
}

SeedAllocation allocate_seeds(std::span<const std::size_t> lengths, int block_width)
{
    const int k = static_cast<int>(lengths.size());
    if (k == 0 || block_width < k)
        throw Error(ErrorKind::Infeasible, std::to_string(k) + " cycles cannot be seeded with " +
                                               std::to_string(block_width) + " bytes");

    // Smallest t for which every cycle fits with at least ceil(l/t) seeds.
    int t = 1;
    for (;; ++t) {
        long need = 0;
        for (auto l : lengths)
            need += ceil_div(l, t);
        if (need <= block_width)
            break;
    }

    // best[i][s]: minimal sum of r over cycles i..k-1 using exactly s seeds,
    // every r <= t. Filled back to front so the forward pass can pick the
    // smallest d_i that still reaches the optimum.
    constexpr int kInf = std::numeric_limits<int>::max() / 2;
    const int m = block_width;
    std::vector<std::vector<int>> best(k + 1, std::vector<int>(m + 1, kInf));
    best[k][0] = 0;
    for (int i = k - 1; i >= 0; --i) {
        const int d_min = ceil_div(lengths[i], t);
        for (int s = 0; s <= m; ++s)
            for (int d = d_min; d <= s; ++d)
                if (best[i + 1][s - d] < kInf)
                    best[i][s] = std::min(best[i][s], ceil_div(lengths[i], d) + best[i + 1][s - d]);
    }

    SeedAllocation alloc;
    alloc.t = 0;
    int remaining = m;
    for (int i = 0; i < k; ++i) {
        const int d_min = ceil_div(lengths[i], t);
        for (int d = d_min; d <= remaining; ++d) {
            const int r = ceil_div(lengths[i], d);
            if (best[i + 1][remaining - d] < kInf && r + best[i + 1][remaining - d] == best[i][remaining]) {
                alloc.seeds.push_back(d);
                alloc.iterations.push_back(r);
                alloc.t = std::max(alloc.t, r);
                remaining -= d;
                break;
            }
        }
    }
    return alloc;
}

DetectionPair build_detection_pair(const SBoxTable& table, const SeedAllocation& alloc)
{
    const CycleDecomposition dec = cycle_decompose(table);
    if (alloc.seeds.size() != dec.count() || alloc.iterations.size() != dec.count())
        throw Error(ErrorKind::AllocationMismatch,
                    "allocation covers " + std::to_string(alloc.seeds.size()) + " cycles, table has " +
                        std::to_string(dec.count()));
    if (alloc.total_seeds() != static_cast<int>(kBlockBytes))
        throw Error(ErrorKind::AllocationMismatch,
                    "seeds sum to " + std::to_string(alloc.total_seeds()) + ", expected 16");

    DetectionPair pair;
    pair.t = alloc.t;
    std::size_t lane = 0;
    for (std::size_t i = 0; i < dec.count(); ++i) {
        const auto& cycle = dec.cycles[i];
        const int r = alloc.iterations[i];
        if (alloc.seeds[i] < 1 || r != ceil_div(cycle.size(), alloc.seeds[i]) || r > alloc.t)
            throw Error(ErrorKind::AllocationMismatch, "inconsistent seed count for cycle " + std::to_string(i));
        for (int j = 0; j < alloc.seeds[i]; ++j)
            pair.p[lane++] = cycle[(static_cast<std::size_t>(j) * r) % cycle.size()];
    }

    Block state = pair.p;
    for (int it = 0; it < pair.t; ++it)
        state = sub_bytes_block(state, table);
    pair.c = state;
    pair.c_hat = sub_bytes_block(state, table);
    return pair;
}

RedundantTables build_redundant_tables(const SBoxTable& table)
{
    RedundantTables out;
    for (unsigned i = 0; i < 256; ++i) {
        const auto x = static_cast<Byte>(i);
        out.h[x] = static_cast<Byte>(table[x] ^ table[right(x)]);
        out.v[x] = static_cast<Byte>(table[x] ^ table[down(x)]);
    }
    return out;
}

SBoxAnalysis analyze_sbox(const SBoxTable& table)
{
    SBoxAnalysis a;
    a.cycles = cycle_decompose(table);
    const auto lengths = a.cycles.lengths();
    a.allocation = allocate_seeds(lengths, static_cast<int>(kBlockBytes));
    a.pair = build_detection_pair(table, a.allocation);
    a.tables = build_redundant_tables(table);
    return a;
}

nlohmann::json to_json(const SBoxAnalysis& analysis)
{
    auto hex_array = [](const std::array<Byte, 256>& t) {
        nlohmann::json arr = nlohmann::json::array();
        for (Byte b : t)
            arr.push_back(to_hex(std::span<const Byte>(&b, 1)));
        return arr;
    };

    nlohmann::json cycles = nlohmann::json::array();
    for (const auto& c : analysis.cycles.cycles) {
        nlohmann::json arr = nlohmann::json::array();
        for (Byte b : c)
            arr.push_back(static_cast<int>(b));
        cycles.push_back(std::move(arr));
    }

    nlohmann::json j;
    j["cycles"] = std::move(cycles);
    j["d"] = analysis.allocation.seeds;
    j["t"] = analysis.allocation.t;
    j["p"] = to_hex(analysis.pair.p);
    j["c"] = to_hex(analysis.pair.c);
    j["c_hat"] = to_hex(analysis.pair.c_hat);
    j["h_table"] = hex_array(analysis.tables.h);
    j["v_table"] = hex_array(analysis.tables.v);
    return j;
}

} // namespace pfalab
