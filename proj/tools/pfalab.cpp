#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pfalab/cost_model.hpp"
#include "pfalab/error.hpp"
#include "pfalab/experiment.hpp"
#include "pfalab/pfa.hpp"
#include "pfalab/sbox_analysis.hpp"

using namespace pfalab;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitCheck = 2;

struct RunOptions {
    std::string impl = "ori";
    std::string scenario;
    unsigned faults = 1;
    std::string placement = "scattered";
    std::size_t n = 10'000;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::string out = "run";
    std::string key;
    bool no_shift_rows = false;
    std::string dmr_mode = "redmr";
    std::string dmr_defense = "zco";
    std::string fault_scope;
    std::size_t curve_step = 100;
    std::size_t curve_trials = 1;
    int max_rounds = 16;
    bool keep_ciphertexts = false;
    bool serial = false;
    bool check = false;
};

ExperimentConfig build_config(const RunOptions& o)
{
    ExperimentConfig cfg;
    cfg.implementation = implementation_from_string(o.impl);
    cfg.faults = o.faults;
    cfg.scenario = o.scenario.empty() ? (o.faults > 1 ? Scenario::MultiFault : Scenario::SingleFault)
                                      : scenario_from_string(o.scenario);
    cfg.placement = placement_from_string(o.placement);
    cfg.n_ciphertexts = o.n;
    cfg.n_trials = o.trials;
    cfg.seed = o.seed;
    if (!o.key.empty())
        cfg.fixed_key = block_from_hex(o.key);
    cfg.shift_rows = !o.no_shift_rows;
    cfg.dmr.mode = dmr_mode_from_string(o.dmr_mode);
    cfg.dmr.defense = dmr_defense_from_string(o.dmr_defense);
    if (!o.fault_scope.empty()) {
        cfg.dmr.scope = fault_scope_from_string(o.fault_scope);
        cfg.bs_scope = cfg.dmr.scope;
    }
    cfg.curve_step = o.curve_step;
    cfg.curve_trials = o.curve_trials;
    cfg.guard.max_correction_rounds = o.max_rounds;
    cfg.keep_ciphertexts = o.keep_ciphertexts;
    cfg.execution = o.serial ? Execution::Serial : Execution::Parallel;
    cfg.validate();
    return cfg;
}

/* Pass/fail of the published expectations for the configured implementation. */
bool check_summary(const ExperimentConfig& cfg, const ExperimentSummary& s)
{
    auto within = [](const std::optional<std::size_t>& v, std::size_t lo, std::size_t hi) {
        return v && *v >= lo && *v <= hi;
    };
    if (cfg.scenario != Scenario::SingleFault || s.trials == 0)
        return true;
    switch (cfg.implementation) {
    case Implementation::Ori:
        return s.full_key_trials * 100 >= s.trials * 95 && within(s.min, 500, 3000);
    case Implementation::Dmr: return within(s.min, 1200, 6000);
    case Implementation::Bs: return within(s.min, 600, 4000);
    case Implementation::Dc:
    case Implementation::DcPrecorrect: return s.any_byte_trials == 0;
    }
    return true;
}

int cmd_run(const RunOptions& o)
{
    const ExperimentConfig cfg = build_config(o);
    const auto start = std::chrono::steady_clock::now();
    const ExperimentResult result = run_experiment(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_run_directory(result, o.out);

    const ExperimentSummary s = summarize(result.records);
    auto cell = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("NA"); };
    std::cerr << to_string(cfg.implementation) << ": trials=" << s.trials << " full_key=" << s.full_key_trials
              << " any_byte=" << s.any_byte_trials << " min=" << cell(s.min) << " median=" << cell(s.median)
              << " p90=" << cell(s.p90) << " non_converged=" << s.non_converged << " (" << seconds << " s, "
              << to_string(cfg.execution) << ")\n";

    if (o.check && !check_summary(cfg, s)) {
        std::cerr << "check failed\n";
        return kExitCheck;
    }
    return 0;
}

struct AttackOptions {
    std::string input;
    int v = -1;
    int v_star = -1;
    std::string known_pt;
    std::string known_ct;
    std::string histogram_out;
    bool skip_zero = false;
};

int cmd_attack(const AttackOptions& o)
{
    std::ifstream in(o.input);
    if (!in)
        throw Error(ErrorKind::Config, "ciphertexts: cannot read " + o.input);
    std::vector<Block> stream = read_ciphertexts(in);
    if (o.skip_zero)
        std::erase_if(stream, [](const Block& b) { return b == Block{}; });
    const CiphertextHistogram hist = accumulate(stream);
    const SBoxTable sbox = SBoxTable::aes();

    if (!o.histogram_out.empty()) {
        std::ofstream h(o.histogram_out);
        if (!h)
            throw Error(ErrorKind::Config, "histogram: cannot write " + o.histogram_out);
        hist.write_csv(h);
    }

    nlohmann::json out;
    out["n"] = hist.n();
    if (o.v >= 0 || o.v_star >= 0) {
        if (o.v < 0 || o.v > 255 || o.v_star < 0 || o.v_star > 255)
            throw Error(ErrorKind::Config, "v, v-star: both are needed, each in 0..255");
        out["recovery"] = to_json(
            recover_key_maxmin(hist, static_cast<Byte>(o.v), static_cast<Byte>(o.v_star), sbox));
    } else {
        const FaultSearchResult search = search_fault_values(hist, sbox);
        out["search"] = {{"top_score", search.top_score()},
                         {"top_class_size", search.top_class().size()},
                         {"conclusive", search.conclusive}};
        if (!o.known_pt.empty() || !o.known_ct.empty()) {
            const auto resolved =
                resolve_fault_hypotheses(search, hist, sbox, block_from_hex(o.known_pt), block_from_hex(o.known_ct));
            if (resolved) {
                out["resolved"] = {{"v", resolved->hypothesis.v},
                                   {"v_star", resolved->hypothesis.v_star},
                                   {"k10", to_hex(resolved->round10_key)},
                                   {"master_key", to_hex(resolved->master_key)}};
            } else {
                out["resolved"] = nullptr;
            }
        }
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

cost::Rational parse_rational(const std::string& s)
{
    const auto slash = s.find('/');
    try {
        if (slash != std::string::npos)
            return cost::Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
        const auto dot = s.find('.');
        if (dot == std::string::npos)
            return cost::Rational(std::stoll(s));
        const std::string frac = s.substr(dot + 1);
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i)
            scale *= 10;
        const std::int64_t whole = std::stoll(s.substr(0, dot).empty() ? "0" : s.substr(0, dot));
        const std::int64_t part = frac.empty() ? 0 : std::stoll(frac);
        return cost::Rational(whole * scale + (s.front() == '-' ? -part : part), scale);
    } catch (const std::exception&) {
        throw Error(ErrorKind::Config, "weight: cannot parse '" + s + "'");
    }
}

int cmd_cost(const std::array<std::string, cost::kOps>& overrides)
{
    cost::WeightProfile w = cost::WeightProfile::unit_default();
    for (std::size_t i = 0; i < cost::kOps; ++i)
        if (!overrides[i].empty())
            w.weight[i] = parse_rational(overrides[i]);
    w.validate();

    std::cout << "implementation,lower,upper\n";
    for (auto scheme : {cost::Scheme::Ori, cost::Scheme::Dmr, cost::Scheme::Bs, cost::Scheme::Algo}) {
        const auto iv = cost::evaluate(cost::cost_of(scheme), w);
        std::cout << cost::to_string(scheme) << ',' << cost::to_decimal(iv.lower) << ','
                  << cost::to_decimal(iv.upper) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Persistent fault attack lab for table-based AES-128"};
    app.require_subcommand(1);

    auto* analyze = app.add_subcommand("analyze-sbox", "Cycle structure, detection pair and redundant tables");

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run a seeded attack experiment");
    run_cmd->add_option("--impl", run.impl, "ori|dmr|bs|dc|dc_precorrect");
    run_cmd->add_option("--scenario", run.scenario, "single_fault|multi_fault (default from --faults)");
    run_cmd->add_option("--faults", run.faults, "Faulty table entries per trial");
    run_cmd->add_option("--placement", run.placement, "scattered|clustered");
    run_cmd->add_option("--n", run.n, "Encryptions per trial");
    run_cmd->add_option("--trials", run.trials);
    run_cmd->add_option("--seed", run.seed, "Master seed");
    run_cmd->add_option("--out", run.out, "Run directory");
    run_cmd->add_option("--key", run.key, "Fixed master key (32 hex chars); random per trial otherwise");
    run_cmd->add_flag("--no-shiftrows", run.no_shift_rows);
    run_cmd->add_option("--dmr-mode", run.dmr_mode, "redmr|iddmr");
    run_cmd->add_option("--dmr-defense", run.dmr_defense, "nco|zco|rco");
    run_cmd->add_option("--fault-scope", run.fault_scope, "module-one|shared");
    run_cmd->add_option("--curve-step", run.curve_step);
    run_cmd->add_option("--curve-trials", run.curve_trials, "Trials that emit distribution curves");
    run_cmd->add_option("--max-rounds", run.max_rounds, "Correction round budget for dc");
    run_cmd->add_flag("--keep-ciphertexts", run.keep_ciphertexts);
    run_cmd->add_flag("--serial", run.serial, "Run trials on one thread");
    run_cmd->add_flag("--check", run.check, "Exit 2 when the run misses its expected range");

    AttackOptions attack;
    auto* attack_cmd = app.add_subcommand("attack", "Re-run the attacker on a stored ciphertext file");
    attack_cmd->add_option("ciphertexts", attack.input, "One hex block per line")->required();
    attack_cmd->add_option("--v", attack.v, "Faulted entry index");
    attack_cmd->add_option("--v-star", attack.v_star, "Index whose output now appears twice");
    attack_cmd->add_option("--known-pt", attack.known_pt);
    attack_cmd->add_option("--known-ct", attack.known_ct);
    attack_cmd->add_option("--histogram", attack.histogram_out, "Write the histogram CSV here");
    attack_cmd->add_flag("--skip-zero", attack.skip_zero, "Drop all-zero blocks first");

    std::array<std::string, cost::kOps> weights;
    auto* cost_cmd = app.add_subcommand("cost", "Cost model CSV");
    cost_cmd->add_option("--t-add", weights[0]);
    cost_cmd->add_option("--t-sub", weights[1]);
    cost_cmd->add_option("--t-shift", weights[2]);
    cost_cmd->add_option("--t-mix", weights[3]);
    cost_cmd->add_option("--t-key", weights[4]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*analyze) {
            std::cout << to_json(analyze_sbox(SBoxTable::aes())).dump(2) << '\n';
            return 0;
        }
        if (*run_cmd)
            return cmd_run(run);
        if (*attack_cmd)
            return cmd_attack(attack);
        if (*cost_cmd)
            return cmd_cost(weights);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
