#include "pfalab/countermeasures.hpp"

#include <string>

#include "pfalab/error.hpp"

namespace pfalab {

std::string_view to_string(DmrMode m)
{
    return m == DmrMode::Redundant ? "redmr" : "iddmr";
}

std::string_view to_string(DmrDefense d)
{
    switch (d) {
    case DmrDefense::NoOutput: return "nco";
    case DmrDefense::ZeroOutput: return "zco";
    case DmrDefense::RandomOutput: return "rco";
    }
    return "unknown";
}

std::string_view to_string(FaultScope s)
{
    return s == FaultScope::ModuleOneOnly ? "module-one" : "shared";
}

DmrMode dmr_mode_from_string(std::string_view s)
{
    if (s == "redmr")
        return DmrMode::Redundant;
    if (s == "iddmr")
        return DmrMode::InverseDecrypt;
    throw Error(ErrorKind::Config, "unknown DMR mode '" + std::string(s) + "' (redmr|iddmr)");
}

DmrDefense dmr_defense_from_string(std::string_view s)
{
    if (s == "nco")
        return DmrDefense::NoOutput;
    if (s == "zco")
        return DmrDefense::ZeroOutput;
    if (s == "rco")
        return DmrDefense::RandomOutput;
    throw Error(ErrorKind::Config, "unknown DMR defense '" + std::string(s) + "' (nco|zco|rco)");
}

FaultScope fault_scope_from_string(std::string_view s)
{
    if (s == "module-one")
        return FaultScope::ModuleOneOnly;
    if (s == "shared")
        return FaultScope::Shared;
    throw Error(ErrorKind::Config, "unknown fault scope '" + std::string(s) + "' (module-one|shared)");
}

GuardedOutput dmr_encrypt(const Block& plaintext, const RoundKeys& keys, const SBoxTable& pristine,
                          const SBoxTable& faulted, const DmrConfig& cfg, Rng& rng,
                          const CipherOptions& opts)
{
    const Block module_one = encrypt(plaintext, keys, faulted, opts);

    bool mismatch = false;
    if (cfg.mode == DmrMode::Redundant) {
        const SBoxTable& second = cfg.scope == FaultScope::Shared ? faulted : pristine;
        mismatch = encrypt(plaintext, keys, second, opts) != module_one;
    } else {
        mismatch = decrypt(module_one, keys, SBoxTable::aes_inverse(), opts) != plaintext;
    }

    GuardedOutput out;
    out.mismatch = mismatch;
    if (!mismatch) {
        out.ciphertext = module_one;
        return out;
    }
    switch (cfg.defense) {
    case DmrDefense::NoOutput:
        out.status = OutputStatus::Suppressed;
        break;
    case DmrDefense::ZeroOutput:
        out.ciphertext = Block{};
        break;
    case DmrDefense::RandomOutput:
        out.ciphertext = rng.block();
        break;
    }
    return out;
}

BsOutputs bs_encrypt_both(const Block& plaintext, const RoundKeys& keys, const SBoxTable& table_a,
                          const SBoxTable& table_b, std::optional<TransientFault> transient)
{
    const auto lookup_a = [&table_a](Byte x) { return table_a[x]; };
    const auto lookup_b = [&table_b](Byte x) { return table_b[x]; };
    const Block state_a = encrypt_to_final_sub_bytes(plaintext, keys, lookup_a);
    Block state_b = encrypt_to_final_sub_bytes(plaintext, keys, lookup_b);
    if (transient)
        state_b[transient->position & 15] ^= transient->mask;

    BsOutputs out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const int src = 4 * ((c + r) & 3) + r;
            const int dst = 4 * c + r;
            out.a[dst] = bs_source_path(BsPath::A, r, c) == BsPath::A ? state_a[src] : state_b[src];
            out.b[dst] = bs_source_path(BsPath::B, r, c) == BsPath::A ? state_a[src] : state_b[src];
        }
    detail::add_round_key(out.a, keys.last());
    detail::add_round_key(out.b, keys.last());
    return out;
}

Block bs_encrypt(const Block& plaintext, const RoundKeys& keys, const SBoxTable& table_a,
                 const SBoxTable& table_b, std::optional<TransientFault> transient)
{
    return bs_encrypt_both(plaintext, keys, table_a, table_b, transient).b;
}

} // namespace pfalab
