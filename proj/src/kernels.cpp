#include "pfalab/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pfalab {

namespace {

struct CorrectionOutcome {
    bool restored = false;
    int rounds = 0;
};

CorrectionOutcome correct_one(const SBoxTable& pristine, const RedundantTables& tables,
                              const DetectionPair& pair, const GuardConfig& cfg, const Fault& f)
{
    SBoxTable faulted = pristine;
    faulted.set(f.index, f.value);
    auto [fixed, report] = correct(faulted, tables, pair, cfg);
    return {fixed == pristine && report.converged, report.rounds_used};
}

} // namespace

std::string_view to_string(Execution e)
{
    return e == Execution::Serial ? "serial" : "parallel";
}

int parallel_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

Fault single_fault(const SBoxTable& pristine, std::size_t i) noexcept
{
    const auto x = static_cast<Byte>(i / 255);
    auto e = static_cast<Byte>(i % 255);
    if (e >= pristine[x])
        ++e;
    return {x, e};
}

DetectionSweep sweep_single_fault_detection(const SBoxTable& pristine, const DetectionPair& pair,
                                            bool use_second_checkpoint, Execution exec)
{
    DetectionSweep out;
    out.total = kSingleFaults;

    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < kSingleFaults; ++i) {
            const Fault f = single_fault(pristine, i);
            SBoxTable faulted = pristine;
            faulted.set(f.index, f.value);
            if (detect(faulted, pair, use_second_checkpoint))
                ++out.detected;
            else
                out.escapes.push_back(f);
        }
        return out;
    }

    std::vector<unsigned char> hit(kSingleFaults, 0);
    const auto count = static_cast<long long>(kSingleFaults);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) {
        const Fault f = single_fault(pristine, static_cast<std::size_t>(i));
        SBoxTable faulted = pristine;
        faulted.set(f.index, f.value);
        hit[static_cast<std::size_t>(i)] = detect(faulted, pair, use_second_checkpoint) ? 1 : 0;
    }
    for (std::size_t i = 0; i < kSingleFaults; ++i) {
        if (hit[i])
            ++out.detected;
        else
            out.escapes.push_back(single_fault(pristine, i));
    }
    return out;
}

CorrectionSweep sweep_single_fault_correction(const SBoxTable& pristine, const RedundantTables& tables,
                                              const DetectionPair& pair, const GuardConfig& cfg,
                                              Execution exec)
{
    CorrectionSweep out;
    out.total = kSingleFaults;

    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < kSingleFaults; ++i) {
            const Fault f = single_fault(pristine, i);
            const auto r = correct_one(pristine, tables, pair, cfg, f);
            out.max_rounds_used = std::max(out.max_rounds_used, r.rounds);
            if (r.restored) {
                ++out.restored;
                if (r.rounds == 1)
                    ++out.restored_in_one_round;
            } else {
                out.failures.push_back(f);
            }
        }
        return out;
    }

    std::vector<CorrectionOutcome> outcomes(kSingleFaults);
    const auto count = static_cast<long long>(kSingleFaults);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        outcomes[idx] = correct_one(pristine, tables, pair, cfg, single_fault(pristine, idx));
    }
    for (std::size_t i = 0; i < kSingleFaults; ++i) {
        const auto& r = outcomes[i];
        out.max_rounds_used = std::max(out.max_rounds_used, r.rounds);
        if (r.restored) {
            ++out.restored;
            if (r.rounds == 1)
                ++out.restored_in_one_round;
        } else {
            out.failures.push_back(single_fault(pristine, i));
        }
    }
    return out;
}

} // namespace pfalab
