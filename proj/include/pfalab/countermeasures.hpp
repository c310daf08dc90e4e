#ifndef PFALAB_COUNTERMEASURES_HPP
#define PFALAB_COUNTERMEASURES_HPP

#include <optional>
#include <string_view>

#include "pfalab/aes.hpp"
#include "pfalab/bytes.hpp"
#include "pfalab/rng.hpp"
#include "pfalab/sbox.hpp"

namespace pfalab {

// ---------------------------------------------------------------------------
// Dual modular redundancy

enum class DmrMode {
    Redundant,      // REDMR: two encryptions, compare ciphertexts
    InverseDecrypt, // IDDMR: encrypt, decrypt the result, compare with plaintext
};

enum class DmrDefense {
    NoOutput,     // NCO
    ZeroOutput,   // ZCO
    RandomOutput, // RCO
};

/// Which DMR modules read the faulted table. IDDMR's second module always
/// decrypts with the pristine inverse table, so the scope only matters for
/// REDMR.
enum class FaultScope { ModuleOneOnly, Shared };

struct DmrConfig {
    DmrMode mode = DmrMode::Redundant;
    DmrDefense defense = DmrDefense::ZeroOutput;
    FaultScope scope = FaultScope::ModuleOneOnly;
};

enum class OutputStatus { Ok, Suppressed };

struct GuardedOutput {
    OutputStatus status = OutputStatus::Ok;
    std::optional<Block> ciphertext; // empty only when NCO suppressed it
    bool mismatch = false;
};

std::string_view to_string(DmrMode m);
std::string_view to_string(DmrDefense d);
std::string_view to_string(FaultScope s);
DmrMode dmr_mode_from_string(std::string_view s);
DmrDefense dmr_defense_from_string(std::string_view s);
FaultScope fault_scope_from_string(std::string_view s);

/* `rng` is only drawn from when RCO fires. */
GuardedOutput dmr_encrypt(const Block& plaintext, const RoundKeys& keys, const SBoxTable& pristine,
                          const SBoxTable& faulted, const DmrConfig& cfg, Rng& rng,
                          const CipherOptions& opts = {});

// ---------------------------------------------------------------------------
// Bytes scrambling

enum class BsPath { A, B };

/// Source path for output byte (row, col) of `dest` in the last-round
/// scrambled ShiftRows. Bytes whose target (row + col) is even cross over
/// from the other path; the rest stay on their own path.
constexpr BsPath bs_source_path(BsPath dest, int row, int col) noexcept
{
    const bool cross = ((row + col) & 1) == 0;
    if (!cross)
        return dest;
    return dest == BsPath::A ? BsPath::B : BsPath::A;
}

/* XOR disturbance of one byte of path B's state just before the last ShiftRows. */
struct TransientFault {
    int position = 0;
    Byte mask = 0;
};

struct BsOutputs {
    Block a{};
    Block b{};
};

BsOutputs bs_encrypt_both(const Block& plaintext, const RoundKeys& keys, const SBoxTable& table_a,
                          const SBoxTable& table_b,
                          std::optional<TransientFault> transient = std::nullopt);

/* The adversary observes path B only. */
Block bs_encrypt(const Block& plaintext, const RoundKeys& keys, const SBoxTable& table_a,
                 const SBoxTable& table_b, std::optional<TransientFault> transient = std::nullopt);

} // namespace pfalab

#endif
