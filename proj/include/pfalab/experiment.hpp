#ifndef PFALAB_EXPERIMENT_HPP
#define PFALAB_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pfalab/countermeasures.hpp"
#include "pfalab/dc_guard.hpp"
#include "pfalab/fault.hpp"
#include "pfalab/kernels.hpp"
#include "pfalab/pfa.hpp"

namespace pfalab {

enum class Implementation { Ori, Dmr, Bs, Dc, DcPrecorrect };
enum class Scenario { SingleFault, MultiFault };

std::string_view to_string(Implementation i);
std::string_view to_string(Scenario s);
Implementation implementation_from_string(std::string_view s);
Scenario scenario_from_string(std::string_view s);

struct ExperimentConfig {
    Implementation implementation = Implementation::Ori;
    Scenario scenario = Scenario::SingleFault;
    unsigned faults = 1;
    Placement placement = Placement::Scattered;
    FaultValuePolicy value_policy = FaultValuePolicy::RandomByte;
    std::size_t n_ciphertexts = 10'000;
    std::size_t n_trials = 1'000;
    std::uint64_t seed = 1;
    std::optional<Block> fixed_key; // seeded random per trial when empty
    bool shift_rows = true;
    DmrConfig dmr{};
    FaultScope bs_scope = FaultScope::Shared;
    GuardConfig guard{};
    std::size_t curve_step = 100;
    std::vector<std::size_t> curve_positions{0};
    std::size_t curve_trials = 1; // the first N trials emit curves
    bool keep_ciphertexts = false;
    Execution execution = Execution::Parallel;

    /* Throws Error{Config} naming the offending field. */
    void validate() const;

    /* Faster defaults for CI: 100 trials. */
    static ExperimentConfig ci_profile(Implementation impl);
};

nlohmann::json to_json(const ExperimentConfig& cfg);

struct CurveSample {
    std::size_t position = 0;
    std::size_t n = 0;
    CiphertextHistogram::Row counts{};
};

struct FaultSearchSummary {
    int top_score = 0;
    std::size_t top_class_size = 0;
    bool planted_in_top_class = false;
    bool conclusive = false;
};

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    Block master_key{};
    Block round10_key{};
    FaultSpec faults;
    FaultCase fault_case = FaultCase::Best;
    std::size_t ciphertexts = 0;       // received by the adversary
    std::size_t zero_blocks_skipped = 0;
    CiphertextHistogram histogram;
    // single-fault oracle-mode attack (v, v* known)
    std::optional<KeyRecoveryResult> recovery;
    std::size_t correct_key_bytes = 0;
    std::optional<std::size_t> min_ciphertexts;
    std::optional<FaultSearchSummary> search;
    std::optional<CorrectionReport> correction; // dc only
    std::vector<CurveSample> curves;
    std::vector<Block> stream; // only with keep_ciphertexts
    double seconds = 0.0;      // wall time; never serialized
};

nlohmann::json to_json(const TrialRecord& rec);

struct ExperimentSummary {
    std::size_t trials = 0;
    std::size_t full_key_trials = 0;
    std::size_t any_byte_trials = 0;
    std::size_t reached = 0;
    std::optional<std::size_t> min;
    std::optional<std::size_t> median;
    std::optional<std::size_t> p90;
    double not_reached_fraction = 0.0;
    std::size_t non_converged = 0;
};

/* Recomputed from the records every time. */
ExperimentSummary summarize(std::span<const TrialRecord> records);

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<TrialRecord> records; // sorted by trial index
};

/* One trial, fully determined by (cfg, trial index). */
TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/* "trial,position,value,n,probability" */
void emit_distribution_curves(std::span<const TrialRecord> records, std::ostream& os);

/* "implementation,min,median,p90,not_reached_fraction" */
void emit_table3(std::span<const std::pair<std::string, ExperimentSummary>> rows, std::ostream& os);

/// Writes config.json, records.jsonl, curves.csv and table3.csv (plus
/// ciphertexts/trial_NNNNNN.txt with keep_ciphertexts) into `dir`.
void write_run_directory(const ExperimentResult& result, const std::filesystem::path& dir);

/* One lowercase 32-char hex block per line. */
void write_ciphertexts(std::span<const Block> blocks, std::ostream& os);
std::vector<Block> read_ciphertexts(std::istream& is);

} // namespace pfalab

#endif
