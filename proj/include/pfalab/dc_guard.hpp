#ifndef PFALAB_DC_GUARD_HPP
#define PFALAB_DC_GUARD_HPP

#include <array>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pfalab/aes.hpp"
#include "pfalab/bytes.hpp"
#include "pfalab/sbox.hpp"
#include "pfalab/sbox_analysis.hpp"

namespace pfalab {

enum class CorrectionScope { FullTable, SingleEntry };

struct GuardConfig {
    int max_correction_rounds = 16;
    CorrectionScope scope = CorrectionScope::FullTable;
    bool use_second_checkpoint = true;
    /* Entries corrected under SingleEntry scope. */
    std::vector<Byte> entries;
};

struct ChangedEntry {
    Byte index = 0;
    Byte old_value = 0;
    Byte new_value = 0;

    friend bool operator==(const ChangedEntry&, const ChangedEntry&) = default;
};

/// Outcome of one correction call. `unresolved` lists the entries whose
/// vote tied in the last round executed; `converged` means nothing is
/// unresolved and a fresh detection pass is clean.
struct CorrectionReport {
    std::vector<ChangedEntry> changed;
    int rounds_used = 0;
    std::vector<Byte> unresolved;
    bool converged = true;
};

/* {"changed": [[x, old, new]], "rounds": n, "unresolved": [x...], "converged": bool} */
nlohmann::json to_json(const CorrectionReport& report);

/// Iterates SubBytes t times from P and compares with C; optionally one more
/// iteration compared with C-hat. True when any checkpoint mismatches.
bool detect(const SBoxTable& table, const DetectionPair& pair, bool use_second_checkpoint = true);

/// The four neighbor reconstructions of entry x, in the order
/// up, down, left, right.
std::array<Byte, 4> reconstruct_candidates(const SBoxTable& table, const RedundantTables& tables,
                                           Byte x) noexcept;

struct VoteResult {
    Byte value = 0;
    bool resolved = false;
};

/// A value seen three or more times wins; a single pair against two
/// distinct singletons wins; a 2-2 split or four distinct values keep
/// `current` and report unresolved.
VoteResult vote(const std::array<Byte, 4>& candidates, Byte current) noexcept;

/// Synchronous rounds of reconstruct-and-vote over the table (or over
/// cfg.entries under SingleEntry scope) until a round changes nothing or
/// the round budget is spent. Never throws on non-convergence.
std::pair<SBoxTable, CorrectionReport> correct(const SBoxTable& table, const RedundantTables& tables,
                                               const DetectionPair& pair, const GuardConfig& cfg = {});

/* Detect, correct when needed, then encrypt with the resulting table. */
Block dc_encrypt(const Block& plaintext, const RoundKeys& keys, const SBoxTable& table,
                 const RedundantTables& tables, const DetectionPair& pair, const GuardConfig& cfg = {},
                 CorrectionReport* report = nullptr, const CipherOptions& opts = {});

/// Stateful device model: the stored table persists across encryptions and
/// every correction is written back to it.
class DcGuard {
public:
    DcGuard(SBoxTable stored, RedundantTables tables, DetectionPair pair, GuardConfig cfg = {});

    Block encrypt(const Block& plaintext, const RoundKeys& keys, const CipherOptions& opts = {});

    const SBoxTable& table() const noexcept { return stored_; }
    /* Report of the most recent correction; empty if none ran yet. */
    const CorrectionReport& last_report() const noexcept { return report_; }
    int corrections_run() const noexcept { return corrections_; }

private:
    SBoxTable stored_;
    RedundantTables tables_;
    DetectionPair pair_;
    GuardConfig cfg_;
    CorrectionReport report_;
    int corrections_ = 0;
};

/* Voted reconstruction replacing a direct table read. */
Byte precorrect_lookup(const SBoxTable& table, const RedundantTables& tables, Byte x) noexcept;

/* Encryption with every SubBytes lookup replaced by precorrect_lookup. */
Block precorrect_encrypt(const Block& plaintext, const RoundKeys& keys, const SBoxTable& table,
                         const RedundantTables& tables, const CipherOptions& opts = {});

} // namespace pfalab

#endif
