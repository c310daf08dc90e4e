#include "pfalab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "pfalab/aes.hpp"
#include "pfalab/error.hpp"
#include "pfalab/rng.hpp"
#include "pfalab/sbox_analysis.hpp"

namespace pfalab {

namespace {

const SBoxAnalysis& aes_analysis()
{
    static const SBoxAnalysis a = analyze_sbox(SBoxTable::aes());
    return a;
}

bool is_zero_block(const Block& b)
{
    return std::all_of(b.begin(), b.end(), [](Byte x) { return x == 0; });
}

/* nearest-rank percentile over a sorted vector */
std::size_t rank_value(const std::vector<std::size_t>& sorted, double q)
{
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

std::string format_probability(double p)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8f", p);
    return buf;
}

nlohmann::json optional_size(const std::optional<std::size_t>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

} // namespace

std::string_view to_string(Implementation i)
{
    switch (i) {
    case Implementation::Ori: return "ori";
    case Implementation::Dmr: return "dmr";
    case Implementation::Bs: return "bs";
    case Implementation::Dc: return "dc";
    case Implementation::DcPrecorrect: return "dc_precorrect";
    }
    return "?";
}

std::string_view to_string(Scenario s)
{
    return s == Scenario::SingleFault ? "single_fault" : "multi_fault";
}

Implementation implementation_from_string(std::string_view s)
{
    for (auto i : {Implementation::Ori, Implementation::Dmr, Implementation::Bs, Implementation::Dc,
                   Implementation::DcPrecorrect})
        if (s == to_string(i))
            return i;
    throw Error(ErrorKind::Config, "impl: unknown implementation '" + std::string(s) +
                                       "' (ori|dmr|bs|dc|dc_precorrect)");
}

Scenario scenario_from_string(std::string_view s)
{
    if (s == "single_fault")
        return Scenario::SingleFault;
    if (s == "multi_fault")
        return Scenario::MultiFault;
    throw Error(ErrorKind::Config, "scenario: unknown scenario '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::Config, msg); };
    if (faults < 1 || faults > 255)
        fail("faults: must be in 1..255");
    if (scenario == Scenario::SingleFault && faults != 1)
        fail("faults: single_fault scenario needs exactly 1 fault");
    if (scenario == Scenario::MultiFault && faults < 2)
        fail("faults: multi_fault scenario needs at least 2 faults");
    if (curve_step == 0)
        fail("curve_step: must be positive");
    for (auto p : curve_positions)
        if (p >= kBlockBytes)
            fail("curve_positions: positions are 0..15");
    if (guard.max_correction_rounds < 1)
        fail("guard.max_correction_rounds: must be at least 1");
    if (implementation == Implementation::Bs && !shift_rows)
        fail("shift_rows: bytes scrambling routes bytes through ShiftRows and cannot disable it");
}

ExperimentConfig ExperimentConfig::ci_profile(Implementation impl)
{
    ExperimentConfig cfg;
    cfg.implementation = impl;
    cfg.n_trials = 100;
    return cfg;
}

nlohmann::json to_json(const ExperimentConfig& cfg)
{
    nlohmann::json positions = nlohmann::json::array();
    for (auto p : cfg.curve_positions)
        positions.push_back(p);
    return {
        {"implementation", std::string(to_string(cfg.implementation))},
        {"scenario", std::string(to_string(cfg.scenario))},
        {"faults", cfg.faults},
        {"placement", std::string(to_string(cfg.placement))},
        {"value_policy", cfg.value_policy == FaultValuePolicy::RandomByte ? "random_byte" : "single_bit"},
        {"n_ciphertexts", cfg.n_ciphertexts},
        {"n_trials", cfg.n_trials},
        {"seed", cfg.seed},
        {"key", cfg.fixed_key ? nlohmann::json(to_hex(*cfg.fixed_key)) : nlohmann::json("random")},
        {"shift_rows", cfg.shift_rows},
        {"dmr",
         {{"mode", std::string(to_string(cfg.dmr.mode))},
          {"defense", std::string(to_string(cfg.dmr.defense))},
          {"fault_scope", std::string(to_string(cfg.dmr.scope))}}},
        {"bs_fault_scope", std::string(to_string(cfg.bs_scope))},
        {"guard",
         {{"max_correction_rounds", cfg.guard.max_correction_rounds},
          {"use_second_checkpoint", cfg.guard.use_second_checkpoint}}},
        {"curve_step", cfg.curve_step},
        {"curve_positions", std::move(positions)},
        {"curve_trials", cfg.curve_trials},
        {"rng", Rng::kAlgorithm},
    };
}

nlohmann::json to_json(const TrialRecord& rec)
{
    nlohmann::json zero_counts = nlohmann::json::array();
    for (std::size_t j = 0; j < kBlockBytes; ++j) {
        const auto& row = rec.histogram.row(j);
        zero_counts.push_back(std::count(row.begin(), row.end(), 0u));
    }
    nlohmann::json j = {
        {"trial", rec.trial},
        {"seed", rec.seed},
        {"rng", Rng::kAlgorithm},
        {"master_key", to_hex(rec.master_key)},
        {"round10_key", to_hex(rec.round10_key)},
        {"fault_spec", to_json(rec.faults)},
        {"fault_case", std::string(to_string(rec.fault_case))},
        {"ciphertexts", rec.ciphertexts},
        {"zero_blocks_skipped", rec.zero_blocks_skipped},
        {"zero_count_values", std::move(zero_counts)},
        {"correct_key_bytes", rec.correct_key_bytes},
        {"min_ciphertexts", optional_size(rec.min_ciphertexts)},
        {"recovery", rec.recovery ? to_json(*rec.recovery) : nlohmann::json(nullptr)},
        {"correction", rec.correction ? to_json(*rec.correction) : nlohmann::json(nullptr)},
    };
    if (rec.search)
        j["search"] = {{"top_score", rec.search->top_score},
                       {"top_class_size", rec.search->top_class_size},
                       {"planted_in_top_class", rec.search->planted_in_top_class},
                       {"conclusive", rec.search->conclusive}};
    else
        j["search"] = nullptr;
    return j;
}

ExperimentSummary summarize(std::span<const TrialRecord> records)
{
    ExperimentSummary s;
    s.trials = records.size();
    std::vector<std::size_t> reached;
    for (const auto& r : records) {
        if (r.correct_key_bytes == kBlockBytes)
            ++s.full_key_trials;
        if (r.correct_key_bytes > 0)
            ++s.any_byte_trials;
        if (r.min_ciphertexts)
            reached.push_back(*r.min_ciphertexts);
        if (r.correction && !r.correction->converged)
            ++s.non_converged;
    }
    std::sort(reached.begin(), reached.end());
    s.reached = reached.size();
    if (!reached.empty()) {
        s.min = reached.front();
        s.median = rank_value(reached, 0.5);
        s.p90 = rank_value(reached, 0.9);
    }
    s.not_reached_fraction =
        s.trials == 0 ? 0.0 : static_cast<double>(s.trials - s.reached) / static_cast<double>(s.trials);
    return s;
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial)
{
    const auto started = std::chrono::steady_clock::now();
    const SBoxAnalysis& analysis = aes_analysis();
    const SBoxTable pristine = SBoxTable::aes();
    const CipherOptions opts{cfg.shift_rows};

    TrialRecord rec;
    rec.trial = trial;
    rec.seed = derive_seed(cfg.seed, trial);
    Rng rng(rec.seed);
    Rng defense_rng(derive_seed(rec.seed, 1));

    rec.master_key = cfg.fixed_key ? *cfg.fixed_key : rng.block();
    const RoundKeys keys = key_expand(rec.master_key);
    rec.round10_key = keys.last();
    rec.faults = random_faults(rng(), cfg.faults, cfg.placement, pristine, cfg.value_policy);
    rec.fault_case = classify_case(rec.faults);
    const SBoxTable faulted = inject(pristine, rec.faults);

    std::optional<DcGuard> guard;
    if (cfg.implementation == Implementation::Dc)
        guard.emplace(faulted, analysis.tables, analysis.pair, cfg.guard);
    const SBoxTable& bs_other = cfg.bs_scope == FaultScope::Shared ? faulted : pristine;

    // nullopt: the device produced no output (NCO)
    auto device = [&](const Block& pt) -> std::optional<Block> {
        switch (cfg.implementation) {
        case Implementation::Ori: return encrypt(pt, keys, faulted, opts);
        case Implementation::Dmr: return dmr_encrypt(pt, keys, pristine, faulted, cfg.dmr, defense_rng, opts).ciphertext;
        case Implementation::Bs: return bs_encrypt(pt, keys, bs_other, faulted);
        case Implementation::Dc: return guard->encrypt(pt, keys, opts);
        case Implementation::DcPrecorrect: return precorrect_encrypt(pt, keys, faulted, analysis.tables, opts);
        }
        return std::nullopt;
    };

    const bool skip_zero = cfg.implementation == Implementation::Dmr && cfg.dmr.defense == DmrDefense::ZeroOutput;
    const bool curves = trial < cfg.curve_trials;
    std::vector<Block> stream;
    stream.reserve(cfg.n_ciphertexts);
    for (std::size_t i = 0; i < cfg.n_ciphertexts; ++i) {
        const auto ct = device(rng.block());
        if (ct) {
            stream.push_back(*ct);
            if (skip_zero && is_zero_block(*ct))
                ++rec.zero_blocks_skipped;
            else
                rec.histogram.add(*ct);
        }
        if (curves && ((i + 1) % cfg.curve_step == 0 || i + 1 == cfg.n_ciphertexts) && !stream.empty())
            for (auto pos : cfg.curve_positions)
                rec.curves.push_back({pos, stream.size(), rec.histogram.row(pos)});
    }
    rec.ciphertexts = stream.size();

    if (cfg.scenario == Scenario::SingleFault) {
        const Fault& f = rec.faults.faults().front();
        const Byte v = f.index;
        const Byte v_star = SBoxTable::aes_inverse()[f.value];
        rec.recovery = recover_key_maxmin(rec.histogram, v, v_star, pristine);
        rec.correct_key_bytes = rec.recovery->correct_count(rec.round10_key);
        rec.min_ciphertexts = min_ciphertexts_to_recover(stream, rec.round10_key, v, v_star, pristine, skip_zero);

        const auto search = search_fault_values(rec.histogram, pristine);
        FaultSearchSummary summary;
        summary.top_score = search.top_score();
        const auto top = search.top_class();
        summary.top_class_size = top.size();
        summary.planted_in_top_class = std::any_of(top.begin(), top.end(), [&](const FaultHypothesis& h) {
            return h.v == v && h.v_star == v_star;
        });
        summary.conclusive = search.conclusive;
        rec.search = summary;
    }

    if (guard) {
        rec.correction = guard->corrections_run() > 0 ? guard->last_report() : CorrectionReport{};
    }
    if (cfg.keep_ciphertexts)
        rec.stream = std::move(stream);

    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return rec;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    aes_analysis(); // build the shared analysis before threads start

    ExperimentResult result;
    result.config = cfg;
    result.records.resize(cfg.n_trials);
    for_each_index(cfg.n_trials, cfg.execution,
                   [&](std::size_t i) { result.records[i] = run_trial(cfg, i); });
    return result;
}

void emit_distribution_curves(std::span<const TrialRecord> records, std::ostream& os)
{
    os << "trial,position,value,n,probability\n";
    for (const auto& rec : records)
        for (const auto& s : rec.curves)
            for (unsigned x = 0; x < 256; ++x)
                os << rec.trial << ',' << s.position << ',' << x << ',' << s.n << ','
                   << format_probability(static_cast<double>(s.counts[x]) / static_cast<double>(s.n)) << '\n';
}

void emit_table3(std::span<const std::pair<std::string, ExperimentSummary>> rows, std::ostream& os)
{
    auto cell = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("NA"); };
    os << "implementation,min,median,p90,not_reached_fraction\n";
    for (const auto& [name, s] : rows) {
        char frac[32];
        std::snprintf(frac, sizeof frac, "%.4f", s.not_reached_fraction);
        os << name << ',' << cell(s.min) << ',' << cell(s.median) << ',' << cell(s.p90) << ',' << frac << '\n';
    }
}

void write_ciphertexts(std::span<const Block> blocks, std::ostream& os)
{
    for (const auto& b : blocks)
        os << to_hex(b) << '\n';
}

std::vector<Block> read_ciphertexts(std::istream& is)
{
    std::vector<Block> out;
    std::string line;
    while (std::getline(is, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        out.push_back(block_from_hex(line));
    }
    return out;
}

void write_run_directory(const ExperimentResult& result, const std::filesystem::path& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    auto open = [&](const fs::path& p) {
        std::ofstream f(p, std::ios::binary);
        if (!f)
            throw Error(ErrorKind::Config, "out: cannot write " + p.string());
        return f;
    };

    {
        auto f = open(dir / "config.json");
        f << to_json(result.config).dump(2) << '\n';
    }
    {
        auto f = open(dir / "records.jsonl");
        for (const auto& rec : result.records)
            f << to_json(rec).dump() << '\n';
    }
    {
        auto f = open(dir / "curves.csv");
        emit_distribution_curves(result.records, f);
    }
    {
        auto f = open(dir / "table3.csv");
        const std::pair<std::string, ExperimentSummary> row{std::string(to_string(result.config.implementation)),
                                                            summarize(result.records)};
        emit_table3(std::span(&row, 1), f);
    }
    if (result.config.keep_ciphertexts) {
        fs::create_directories(dir / "ciphertexts");
        for (const auto& rec : result.records) {
            char name[32];
            std::snprintf(name, sizeof name, "trial_%06zu.txt", rec.trial);
            auto f = open(dir / "ciphertexts" / name);
            write_ciphertexts(rec.stream, f);
        }
    }
}

} // namespace pfalab
