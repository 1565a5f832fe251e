#pragma once

// Multistart Nelder-Mead over two-qubit scenarios.
//
// Search space: the state cos(a)|00> + sin(a)|11> (every pure two-qubit state
// up to local unitaries, which the observables absorb) and four unit Bloch
// vectors for A0, A1, B0, B1. All nine parameters are angles, so every point
// of R^9 decodes to a valid scenario.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bellri/qmodel.hpp"

namespace bellri::optimizer {

struct BlochAngles {
    double theta = 0.0;
    double phi = 0.0;
};

struct ScenarioParams {
    static constexpr std::size_t kSize = 9;

    double schmidt_angle = 0.0;
    std::array<BlochAngles, 4> observables{};  ///< A0, A1, B0, B1

    std::vector<double> flatten() const;
    static ScenarioParams unflatten(std::span<const double> x);
    qmodel::QuantumScenario decode() const;
};

using Objective = std::function<double(const qmodel::QuantumScenario&)>;
using VectorObjective = std::function<double(std::span<const double>)>;

struct OptConfig {
    int restarts = 32;
    int max_evals = 6000;  ///< per restart
    std::uint64_t seed = 0;
    double tol = 1e-13;    ///< simplex value spread at convergence
    bool parallel = true;
};

struct OptResult {
    double best_value = 0.0;
    ScenarioParams best_params;
    std::size_t evaluations = 0;
    std::vector<double> trace;  ///< best value per restart
    std::size_t best_restart = 0;
    /// Largest objective value seen at any evaluation of any restart.
    double trajectory_max = 0.0;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    double trajectory_max = 0.0;
};

/// Maximize f from x0 with an axis-aligned initial simplex of size `step`.
/// The simplex is rebuilt around the incumbent until a rebuild stops
/// improving by more than tol. NonFiniteObjective on NaN/inf values.
SimplexResult nelder_mead_max(const VectorObjective& f, std::vector<double> x0, double step, int max_evals,
                              double tol);

/// Multistart maximization. Restart i draws its start from an engine seeded
/// with seed + i; the merge picks the largest value, lowest index on ties.
OptResult maximize(const Objective& objective, const OptConfig& config);

/// Single refinement run from a given start.
OptResult refine(const Objective& objective, const ScenarioParams& start, const OptConfig& config);

/// Pearson CHSH; 0 when some variance is below 1e-10.
double chsh_objective(const qmodel::QuantumScenario& sc);

/// CHSH - weight (eta_A - target)^2, with the same degeneracy rule.
Objective eta_penalty_objective(double target, double weight);

struct EtaPoint {
    double eta = 0.0;
    double max_chsh = 0.0;
    double achieved_eta = 0.0;
    double bound = 0.0;  ///< 2 sqrt2 sqrt(1 - eta^2)
    bool feasible = false;  ///< |achieved - target| <= 1e-3
};

/// Constrained maxima along a grid of eta targets in [0, 1]. The penalty
/// weight climbs 1e3 -> 1e5 -> 1e7, each stage warm-started from the last.
std::vector<EtaPoint> trace_eta_curve(std::span<const double> eta_grid, const OptConfig& config);

}  // namespace bellri::optimizer
