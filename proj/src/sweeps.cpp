#include "bellri/sweeps.hpp"

#include <algorithm>
#include <limits>

#include "bellri/qmodel.hpp"

namespace bellri::sweeps {

std::vector<TlmSample> tlm_samples(std::size_t count, std::uint64_t seed, std::size_t dim_lo, std::size_t dim_hi,
                                   Mode mode, double tol) {
    return map_samples(
        count, seed,
        [&](sampling::Rng& rng, std::size_t) {
            const auto sc = sampling::random_bipartite(dim_lo, dim_hi, rng);
            const auto res = ri::tlm_check(qmodel::moments(sc).table(), tol);
            return TlmSample{std::min(res.slack[0], res.slack[1]), res.pass};
        },
        mode);
}

std::vector<Theorem2Sample> theorem2_samples(std::size_t count, std::uint64_t seed, std::size_t dim_lo,
                                             std::size_t dim_hi, Mode mode, double tol) {
    return map_samples(
        count, seed,
        [&](sampling::Rng& rng, std::size_t) {
            const auto sc = sampling::random_bipartite(dim_lo, dim_hi, rng);
            const auto m = qmodel::moments(sc);
            const auto t2 = qmodel::theorem2_check(sc, tol);
            return Theorem2Sample{m.alice.eta, t2.rows[0].rhs, qmodel::theorem1_rhs(m)[0], t2.pass};
        },
        mode);
}

std::vector<double> cov_psd_margins(std::size_t count, std::uint64_t seed, std::size_t dim_lo, std::size_t dim_hi,
                                    Mode mode) {
    return map_samples(
        count, seed,
        [&](sampling::Rng& rng, std::size_t) {
            const auto sc = sampling::random_bipartite(dim_lo, dim_hi, rng);
            double margin = std::numeric_limits<double>::infinity();
            for (int j = 0; j < 2; ++j) {
                const auto m = qmodel::quantum_cov_matrix(sc, j);
                const auto ev = linalg::eigenvalues(m);
                margin = std::min(margin, ev.front() / std::max(1.0, std::abs(ev.back())));
            }
            return margin;
        },
        mode);
}

std::vector<ri::Verdict> classify_batch(const std::vector<CorrelatorTable>& tables, double tol, Mode mode) {
    std::vector<ri::Verdict> out(tables.size());
    const auto n = static_cast<std::ptrdiff_t>(tables.size());
    if (mode == Mode::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = ri::classify(tables[k], tol);
    } else {
        for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = ri::classify(tables[k], tol);
    }
    return out;
}

SweepSummary summarize(const std::vector<TlmSample>& samples) {
    SweepSummary s;
    s.samples = samples.size();
    s.worst_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (!samples[k].pass) ++s.failures;
        if (samples[k].slack < s.worst_slack) {
            s.worst_slack = samples[k].slack;
            s.worst_index = k;
        }
    }
    return s;
}

}  // namespace bellri::sweeps
