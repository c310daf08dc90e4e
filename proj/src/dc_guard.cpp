#include "pfalab/dc_guard.hpp"

#include <numeric>

namespace pfalab {

nlohmann::json to_json(const CorrectionReport& report)
{
    nlohmann::json changed = nlohmann::json::array();
    for (const auto& c : report.changed)
        changed.push_back({static_cast<int>(c.index), static_cast<int>(c.old_value),
                           static_cast<int>(c.new_value)});
    nlohmann::json unresolved = nlohmann::json::array();
    for (Byte x : report.unresolved)
        unresolved.push_back(static_cast<int>(x));
    return {{"changed", std::move(changed)},
            {"rounds", report.rounds_used},
            {"unresolved", std::move(unresolved)},
            {"converged", report.converged}};
}

bool detect(const SBoxTable& table, const DetectionPair& pair, bool use_second_checkpoint)
{
    Block state = pair.p;
    for (int it = 0; it < pair.t; ++it)
        state = sub_bytes_block(state, table);
    if (state != pair.c)
        return true;
    return use_second_checkpoint && sub_bytes_block(state, table) != pair.c_hat;
}

std::array<Byte, 4> reconstruct_candidates(const SBoxTable& table, const RedundantTables& tables,
                                           Byte x) noexcept
{
    const Byte u = up(x);
    const Byte l = left(x);
    return {static_cast<Byte>(table[u] ^ tables.v[u]), static_cast<Byte>(table[down(x)] ^ tables.v[x]),
            static_cast<Byte>(table[l] ^ tables.h[l]), static_cast<Byte>(table[right(x)] ^ tables.h[x])};
}

VoteResult vote(const std::array<Byte, 4>& candidates, Byte current) noexcept
{
    int best_count = 0;
    Byte best = current;
    bool tie = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        int n = 0;
        for (Byte c : candidates)
            n += c == candidates[i] ? 1 : 0;
        if (n > best_count) {
            best_count = n;
            best = candidates[i];
            tie = false;
        } else if (n == best_count && candidates[i] != best) {
            tie = true;
        }
    }
    if (best_count >= 3 || (best_count == 2 && !tie))
        return {best, true};
    return {current, false};
}

std::pair<SBoxTable, CorrectionReport> correct(const SBoxTable& table, const RedundantTables& tables,
                                               const DetectionPair& pair, const GuardConfig& cfg)
{
    std::vector<Byte> scope;
    if (cfg.scope == CorrectionScope::SingleEntry) {
        scope = cfg.entries;
    } else {
        scope.resize(256);
        std::iota(scope.begin(), scope.end(), Byte{0});
    }

    SBoxTable current = table;
    CorrectionReport report;
    const int budget = cfg.max_correction_rounds < 1 ? 1 : cfg.max_correction_rounds;
    for (int round = 0; round < budget; ++round) {
        const SBoxTable snapshot = current;
        std::vector<ChangedEntry> changes;
        report.unresolved.clear();
        for (Byte x : scope) {
            const auto result = vote(reconstruct_candidates(snapshot, tables, x), snapshot[x]);
            if (!result.resolved)
                report.unresolved.push_back(x);
            else if (result.value != snapshot[x])
                changes.push_back({x, snapshot[x], result.value});
        }
        if (changes.empty())
            break;
        for (const auto& c : changes)
            current.set(c.index, c.new_value);
        report.changed.insert(report.changed.end(), changes.begin(), changes.end());
        ++report.rounds_used;
    }
    report.converged = report.unresolved.empty() && !detect(current, pair, cfg.use_second_checkpoint);
    return {current, std::move(report)};
}

Block dc_encrypt(const Block& plaintext, const RoundKeys& keys, const SBoxTable& table,
                 const RedundantTables& tables, const DetectionPair& pair, const GuardConfig& cfg,
                 CorrectionReport* report, const CipherOptions& opts)
{
    if (!detect(table, pair, cfg.use_second_checkpoint)) {
        if (report)
            *report = CorrectionReport{};
        return encrypt(plaintext, keys, table, opts);
    }
    auto [fixed, rep] = correct(table, tables, pair, cfg);
    if (report)
        *report = std::move(rep);
    return encrypt(plaintext, keys, fixed, opts);
}

DcGuard::DcGuard(SBoxTable stored, RedundantTables tables, DetectionPair pair, GuardConfig cfg)
    : stored_(stored), tables_(tables), pair_(pair), cfg_(std::move(cfg))
{
}

Block DcGuard::encrypt(const Block& plaintext, const RoundKeys& keys, const CipherOptions& opts)
{
    if (detect(stored_, pair_, cfg_.use_second_checkpoint)) {
        auto [fixed, rep] = correct(stored_, tables_, pair_, cfg_);
        stored_ = fixed;
        report_ = std::move(rep);
        ++corrections_;
    }
    return pfalab::encrypt(plaintext, keys, stored_, opts);
}

Byte precorrect_lookup(const SBoxTable& table, const RedundantTables& tables, Byte x) noexcept
{
    return vote(reconstruct_candidates(table, tables, x), table[x]).value;
}

Block precorrect_encrypt(const Block& plaintext, const RoundKeys& keys, const SBoxTable& table,
                         const RedundantTables& tables, const CipherOptions& opts)
{
    return encrypt_with(
        plaintext, keys, [&](Byte x) { return precorrect_lookup(table, tables, x); }, opts);
}

} // namespace pfalab
