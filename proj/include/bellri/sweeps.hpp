#pragma once

// Monte-Carlo batches. Each sample k draws from its own engine
// make_rng(seed, k), so the serial and the OpenMP paths produce identical
// per-sample results in identical order.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "bellri/correlators.hpp"
#include "bellri/ri.hpp"
#include "bellri/sampling.hpp"

namespace bellri::sweeps {

enum class Mode { serial, parallel };

/// out[k] = fn(rng_k, k) for k < count.
template <class Fn>
auto map_samples(std::size_t count, std::uint64_t seed, Fn&& fn, Mode mode) {
    using R = decltype(fn(std::declval<sampling::Rng&>(), std::size_t{}));
    std::vector<R> out(count);
    const auto n = static_cast<std::ptrdiff_t>(count);
    if (mode == Mode::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            sampling::Rng rng = sampling::make_rng(seed, static_cast<std::uint64_t>(k));
            out[k] = fn(rng, static_cast<std::size_t>(k));
        }
    } else {
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            sampling::Rng rng = sampling::make_rng(seed, static_cast<std::uint64_t>(k));
            out[k] = fn(rng, static_cast<std::size_t>(k));
        }
    }
    return out;
}

struct SweepSummary {
    std::size_t samples = 0;
    std::size_t failures = 0;
    double worst_slack = 0.0;  ///< smallest rhs - lhs seen
    std::size_t worst_index = 0;
};

struct TlmSample {
    double slack = 0.0;  ///< min over both rows
    bool pass = false;
};

/// Random bipartite scenarios with party dims in [dim_lo, dim_hi], GUE
/// observables, fed through tlm_check.
std::vector<TlmSample> tlm_samples(std::size_t count, std::uint64_t seed, std::size_t dim_lo, std::size_t dim_hi,
                                   Mode mode, double tol = 1e-9);

struct Theorem2Sample {
    double eta_a = 0.0;
    double row1_rhs = 0.0;      ///< with the eta terms
    double row1_rhs_eta0 = 0.0; ///< eta forced to 0
    bool pass = false;
};

std::vector<Theorem2Sample> theorem2_samples(std::size_t count, std::uint64_t seed, std::size_t dim_lo,
                                             std::size_t dim_hi, Mode mode, double tol = 1e-9);

/// Smallest eigenvalue (relative to max(1, norm)) of quantum_cov_matrix
/// over both j, per sample.
std::vector<double> cov_psd_margins(std::size_t count, std::uint64_t seed, std::size_t dim_lo, std::size_t dim_hi,
                                    Mode mode);

std::vector<ri::Verdict> classify_batch(const std::vector<CorrelatorTable>& tables, double tol, Mode mode);

SweepSummary summarize(const std::vector<TlmSample>& samples);

}  // namespace bellri::sweeps
