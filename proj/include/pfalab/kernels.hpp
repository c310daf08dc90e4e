#ifndef PFALAB_KERNELS_HPP
#define PFALAB_KERNELS_HPP

#include <cstddef>
#include <exception>
#include <string_view>
#include <vector>

#include "pfalab/dc_guard.hpp"
#include "pfalab/fault.hpp"
#include "pfalab/sbox.hpp"
#include "pfalab/sbox_analysis.hpp"

namespace pfalab {

/// Serial is the reference path kept for testing; Parallel runs the same
/// work under OpenMP (falls back to serial when built without it).
enum class Execution { Serial, Parallel };

std::string_view to_string(Execution e);
int parallel_threads();

/// Calls fn(i) for i in [0, n). Under Parallel the calls are distributed
/// over threads; fn must only write state owned by index i. The first
/// exception thrown is rethrown after the loop.
template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn)
{
    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::exception_ptr error;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(pfalab_for_each_index)
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
}

/* Every single-entry fault (x, e*), e* != S[x]: 256 * 255 of them. */
inline constexpr std::size_t kSingleFaults = 256 * 255;

/* Fault number i in the canonical enumeration order (x major, e* ascending). */
Fault single_fault(const SBoxTable& pristine, std::size_t i) noexcept;

struct DetectionSweep {
    std::size_t total = 0;
    std::size_t detected = 0;
    std::vector<Fault> escapes; // undetected faults, in enumeration order
};

DetectionSweep sweep_single_fault_detection(const SBoxTable& pristine, const DetectionPair& pair,
                                            bool use_second_checkpoint, Execution exec);

struct CorrectionSweep {
    std::size_t total = 0;
    std::size_t restored = 0;          // byte-exact pristine table and clean detection
    std::size_t restored_in_one_round = 0;
    int max_rounds_used = 0;
    std::vector<Fault> failures; // in enumeration order
};

CorrectionSweep sweep_single_fault_correction(const SBoxTable& pristine, const RedundantTables& tables,
                                              const DetectionPair& pair, const GuardConfig& cfg,
                                              Execution exec);

} // namespace pfalab

#endif
