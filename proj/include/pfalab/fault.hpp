#ifndef PFALAB_FAULT_HPP
#define PFALAB_FAULT_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pfalab/bytes.hpp"
#include "pfalab/sbox.hpp"

namespace pfalab {

/* One corrupted table entry: entry `index` now holds `value`. */
struct Fault {
    Byte index = 0;
    Byte value = 0;

    friend bool operator==(const Fault&, const Fault&) = default;
};

enum class Placement { Scattered, Clustered };

/// Positional classification of a set of faulty entries on the toroidal
/// 16x16 grid.
///   Best:    every entry has at most one faulty 4-neighbor.
///   Average: some entry has exactly two, none has three or more, and no
///            faulty entry has all four neighbors faulty.
///   Worst:   anything else.
enum class FaultCase { Best, Average, Worst };

enum class FaultValuePolicy { RandomByte, SingleBitFlip };

std::string_view to_string(Placement p);
std::string_view to_string(FaultCase c);
Placement placement_from_string(std::string_view s);

/// A validated set of persistent table corruptions. Indices are distinct
/// and every faulty value differs from the pristine entry it replaces.
class FaultSpec {
public:
    FaultSpec() = default;

    /* Throws Error{InvalidFault} on duplicate indices or value-preserving faults. */
    FaultSpec(std::vector<Fault> faults, const SBoxTable& pristine,
              Placement placement = Placement::Scattered);

    const std::vector<Fault>& faults() const noexcept { return faults_; }
    std::size_t size() const noexcept { return faults_.size(); }
    bool empty() const noexcept { return faults_.empty(); }
    Placement placement() const noexcept { return placement_; }
    std::vector<Byte> indices() const;

    friend bool operator==(const FaultSpec&, const FaultSpec&) = default;

private:
    std::vector<Fault> faults_;
    Placement placement_ = Placement::Scattered;
};

/// Returns a corrupted copy; the input table is untouched, so dropping the
/// copy is the "storage refresh". Throws Error{InvalidFault} if a fault
/// would leave an entry of `table` unchanged.
SBoxTable inject(const SBoxTable& table, const FaultSpec& spec);

FaultCase classify_case(std::span<const Byte> faulty_indices);
FaultCase classify_case(const FaultSpec& spec);

/// Seeded fault generator. Scattered placement redraws positions until the
/// Best-case predicate holds; Clustered fills a toroidal block around a
/// random anchor, outer ring first (lambda = 8 is a 3x3 ring, 9 adds the
/// center). Throws Error{PlacementInfeasible} after 10,000 rejected draws
/// and Error{InvalidFault} for lambda outside 1..255.
FaultSpec random_faults(std::uint64_t seed, unsigned lambda, Placement placement,
                        const SBoxTable& pristine,
                        FaultValuePolicy policy = FaultValuePolicy::RandomByte);

/* {"faults": [{"x": int, "value": int}], "placement": "scattered"|"clustered"} */
nlohmann::json to_json(const FaultSpec& spec);
FaultSpec fault_spec_from_json(const nlohmann::json& j, const SBoxTable& pristine);

} // namespace pfalab

#endif
