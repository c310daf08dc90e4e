#include "pfalab/fault.hpp"

#include <algorithm>
#include <array>
#include <bitset>
#include <cmath>
#include <numeric>
#include <string>

#include "pfalab/error.hpp"
#include "pfalab/rng.hpp"

namespace pfalab {

namespace {

constexpr int kMaxPlacementDraws = 10'000;

Byte draw_faulty_value(Rng& rng, Byte pristine, FaultValuePolicy policy)
{
    if (policy == FaultValuePolicy::SingleBitFlip)
        return static_cast<Byte>(pristine ^ (1u << rng.below(8)));
    // uniform over the 255 values != pristine
    auto v = static_cast<Byte>(rng.below(255));
    return v >= pristine ? static_cast<Byte>(v + 1) : v;
}

std::vector<Byte> draw_distinct_indices(Rng& rng, unsigned lambda)
{
    std::array<Byte, 256> pool{};
    std::iota(pool.begin(), pool.end(), Byte{0});
    for (unsigned i = 0; i < lambda; ++i) {
        auto j = i + static_cast<unsigned>(rng.below(256 - i));
        std::swap(pool[i], pool[j]);
    }
    return {pool.begin(), pool.begin() + lambda};
}

std::vector<Byte> cluster_indices(Rng& rng, unsigned lambda)
{
    const auto side = static_cast<unsigned>(std::ceil(std::sqrt(static_cast<double>(lambda))));
    const auto anchor = static_cast<Byte>(rng.below(256));

    struct Cell {
        unsigned dr, dc, ring;
    };
    std::vector<Cell> cells;
    const int centre2 = static_cast<int>(side) - 1;
    for (unsigned dr = 0; dr < side; ++dr)
        for (unsigned dc = 0; dc < side; ++dc) {
            const int a = std::abs(2 * static_cast<int>(dr) - centre2);
            const int b = std::abs(2 * static_cast<int>(dc) - centre2);
            cells.push_back({dr, dc, static_cast<unsigned>(std::max(a, b))});
        }
    std::stable_sort(cells.begin(), cells.end(),
                     [](const Cell& x, const Cell& y) { return x.ring > y.ring; });

    std::vector<Byte> out;
    for (unsigned i = 0; i < lambda; ++i)
        out.push_back(grid_index(grid_row(anchor) + cells[i].dr, grid_col(anchor) + cells[i].dc));
    return out;
}

} // namespace

std::string_view to_string(Placement p)
{
    return p == Placement::Clustered ? "clustered" : "scattered";
}

std::string_view to_string(FaultCase c)
{
    switch (c) {
    case FaultCase::Best: return "best";
    case FaultCase::Average: return "average";
    case FaultCase::Worst: return "worst";
    }
    return "unknown";
}

Placement placement_from_string(std::string_view s)
{
    if (s == "scattered")
        return Placement::Scattered;
    if (s == "clustered")
        return Placement::Clustered;
    throw Error(ErrorKind::Config, "unknown placement '" + std::string(s) + "'");
}

FaultSpec::FaultSpec(std::vector<Fault> faults, const SBoxTable& pristine, Placement placement)
    : faults_(std::move(faults)), placement_(placement)
{
    std::bitset<256> seen;
    for (const auto& f : faults_) {
        if (seen.test(f.index))
            throw Error(ErrorKind::InvalidFault, "index " + std::to_string(f.index) + " faulted twice");
        seen.set(f.index);
        if (f.value == pristine[f.index])
            throw Error(ErrorKind::InvalidFault,
                        "fault at " + std::to_string(f.index) + " keeps the pristine value");
    }
}

std::vector<Byte> FaultSpec::indices() const
{
    std::vector<Byte> out;
    out.reserve(faults_.size());
    for (const auto& f : faults_)
        out.push_back(f.index);
    return out;
}

SBoxTable inject(const SBoxTable& table, const FaultSpec& spec)
{
    SBoxTable out = table;
    for (const auto& f : spec.faults()) {
        if (table[f.index] == f.value)
            throw Error(ErrorKind::InvalidFault,
                        "fault at " + std::to_string(f.index) + " keeps the stored value");
        out.set(f.index, f.value);
    }
    return out;
}

FaultCase classify_case(std::span<const Byte> faulty_indices)
{
    std::bitset<256> faulty;
    for (Byte x : faulty_indices)
        faulty.set(x);

    bool some_two = false;
    for (unsigned i = 0; i < 256; ++i) {
        const auto x = static_cast<Byte>(i);
        int n = 0;
        for (Byte y : neighbors(x))
            n += faulty.test(y) ? 1 : 0;
        if (n >= 3)
            return FaultCase::Worst;
        some_two = some_two || n == 2;
    }
    // with at most two faulty neighbors anywhere, no faulty entry can be
    // fully enclosed, so the remaining split is on exactly-two
    return some_two ? FaultCase::Average : FaultCase::Best;
}

FaultCase classify_case(const FaultSpec& spec)
{
    const auto idx = spec.indices();
    return classify_case(std::span<const Byte>(idx));
}

FaultSpec random_faults(std::uint64_t seed, unsigned lambda, Placement placement,
                        const SBoxTable& pristine, FaultValuePolicy policy)
{
    if (lambda < 1 || lambda > 255)
        throw Error(ErrorKind::InvalidFault, "fault count must be in 1..255, got " + std::to_string(lambda));

    Rng rng(seed);
    std::vector<Byte> positions;
    if (placement == Placement::Clustered) {
        positions = cluster_indices(rng, lambda);
    } else {
        int draws = 0;
        for (;;) {
            positions = draw_distinct_indices(rng, lambda);
            if (classify_case(std::span<const Byte>(positions)) == FaultCase::Best)
                break;
            if (++draws >= kMaxPlacementDraws)
                throw Error(ErrorKind::PlacementInfeasible,
                            "no best-case placement of " + std::to_string(lambda) + " faults after " +
                                std::to_string(kMaxPlacementDraws) + " draws");
        }
    }

    std::vector<Fault> faults;
    faults.reserve(positions.size());
    for (Byte x : positions)
        faults.push_back({x, draw_faulty_value(rng, pristine[x], policy)});
    return FaultSpec(std::move(faults), pristine, placement);
}

nlohmann::json to_json(const FaultSpec& spec)
{
    nlohmann::json faults = nlohmann::json::array();
    for (const auto& f : spec.faults())
        faults.push_back({{"x", static_cast<int>(f.index)}, {"value", static_cast<int>(f.value)}});
    return {{"faults", std::move(faults)}, {"placement", std::string(to_string(spec.placement()))}};
}

FaultSpec fault_spec_from_json(const nlohmann::json& j, const SBoxTable& pristine)
{
    std::vector<Fault> faults;
    for (const auto& f : j.at("faults")) {
        const int x = f.at("x").get<int>();
        const int value = f.at("value").get<int>();
        if (x < 0 || x > 255 || value < 0 || value > 255)
            throw Error(ErrorKind::InvalidFault, "fault fields must be bytes");
        faults.push_back({static_cast<Byte>(x), static_cast<Byte>(value)});
    }
    const auto placement = placement_from_string(j.value("placement", std::string("scattered")));
    return FaultSpec(std::move(faults), pristine, placement);
}

} // namespace pfalab
