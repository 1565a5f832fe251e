#include "bellri/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "bellri/error.hpp"
#include "bellri/sampling.hpp"

namespace bellri::optimizer {

std::vector<double> ScenarioParams::flatten() const {
    std::vector<double> x{schmidt_angle};
    for (const auto& b : observables) {
        x.push_back(b.theta);
        x.push_back(b.phi);
    }
    return x;
}

ScenarioParams ScenarioParams::unflatten(std::span<const double> x) {
    if (x.size() != kSize) throw MalformedInput("scenario parameter vector must have 9 entries");
    ScenarioParams p;
    p.schmidt_angle = x[0];
    for (std::size_t k = 0; k < 4; ++k) p.observables[k] = {x[1 + 2 * k], x[2 + 2 * k]};
    return p;
}

qmodel::QuantumScenario ScenarioParams::decode() const {
    qmodel::StateVector psi(4);
    psi[0] = std::cos(schmidt_angle);
    psi[3] = std::sin(schmidt_angle);
    auto obs = [&](std::size_t k) {
        return qmodel::Observable::bloch_angles(observables[k].theta, observables[k].phi);
    };
    return qmodel::make_bipartite(qmodel::QuantumState::normalized(std::move(psi)), {obs(0), obs(1)},
                                  {obs(2), obs(3)});
}

namespace {

std::string dump(std::span<const double> x) {
    std::ostringstream os;
    os.precision(17);
    os << "[";
    for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
    os << "]";
    return os.str();
}

struct Simplex {
    std::vector<std::vector<double>> pts;
    std::vector<double> vals;  // objective values (maximized)
};

}  // namespace

SimplexResult nelder_mead_max(const VectorObjective& f, std::vector<double> x0, double step, int max_evals,
                              double tol) {
    const std::size_t n = x0.size();
    SimplexResult res;
    res.trajectory_max = -std::numeric_limits<double>::infinity();

    auto eval = [&](const std::vector<double>& x) {
        const double v = f(x);
        ++res.evaluations;
        if (!std::isfinite(v)) throw NonFiniteObjective("objective is not finite at " + dump(x));
        res.trajectory_max = std::max(res.trajectory_max, v);
        return v;
    };

    res.x = std::move(x0);
    res.value = eval(res.x);
    const std::size_t budget = static_cast<std::size_t>(std::max(1, max_evals));

    for (int rebuild = 0; rebuild < 8 && res.evaluations < budget; ++rebuild) {
        Simplex s;
        s.pts.push_back(res.x);
        s.vals.push_back(res.value);
        for (std::size_t k = 0; k < n && res.evaluations < budget; ++k) {
            auto p = res.x;
            p[k] += step;
            s.vals.push_back(eval(p));
            s.pts.push_back(std::move(p));
        }
        if (s.pts.size() != n + 1) break;

        std::vector<std::size_t> order(n + 1);
        while (res.evaluations < budget) {
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.vals[a] > s.vals[b]; });
            const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
            if (s.vals[best] - s.vals[worst] <= tol) break;

            std::vector<double> centroid(n, 0.0);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t d = 0; d < n; ++d) centroid[d] += s.pts[order[k]][d] / double(n);
            auto along = [&](double t) {
                std::vector<double> p(n);
                for (std::size_t d = 0; d < n; ++d) p[d] = centroid[d] + t * (s.pts[worst][d] - centroid[d]);
                return p;
            };

            auto xr = along(-1.0);
            const double fr = eval(xr);
            if (fr > s.vals[best]) {
                auto xe = along(-2.0);
                const double fe = eval(xe);
                if (fe > fr) {
                    s.pts[worst] = std::move(xe);
                    s.vals[worst] = fe;
                } else {
                    s.pts[worst] = std::move(xr);
                    s.vals[worst] = fr;
                }
                continue;
            }
            if (fr > s.vals[second]) {
                s.pts[worst] = std::move(xr);
                s.vals[worst] = fr;
                continue;
            }
            const bool outside = fr > s.vals[worst];
            auto xc = along(outside ? -0.5 : 0.5);
            const double fc = eval(xc);
            if (fc > std::max(fr, s.vals[worst]) || (!outside && fc > s.vals[worst])) {
                s.pts[worst] = std::move(xc);
                s.vals[worst] = fc;
                continue;
            }
            for (std::size_t k = 1; k <= n && res.evaluations < budget; ++k) {
                auto& p = s.pts[order[k]];
                for (std::size_t d = 0; d < n; ++d) p[d] = s.pts[best][d] + 0.5 * (p[d] - s.pts[best][d]);
                s.vals[order[k]] = eval(p);
            }
        }
        const auto it = std::max_element(s.vals.begin(), s.vals.end());
        const std::size_t b = static_cast<std::size_t>(it - s.vals.begin());
        const double gain = *it - res.value;
        if (*it >= res.value) {
            res.value = *it;
            res.x = s.pts[b];
        }
        if (gain <= tol && rebuild > 0) break;
        step *= 0.5;
    }
    return res;
}

namespace {

std::vector<double> random_start(sampling::Rng& rng) {
    std::uniform_real_distribution<double> alpha(0.0, 0.5 * std::numbers::pi);
    std::uniform_real_distribution<double> theta(0.0, std::numbers::pi);
    std::uniform_real_distribution<double> phi(0.0, 2.0 * std::numbers::pi);
    std::vector<double> x{alpha(rng)};
    for (int k = 0; k < 4; ++k) {
        x.push_back(theta(rng));
        x.push_back(phi(rng));
    }
    return x;
}

VectorObjective lift(const Objective& objective) {
    return [&objective](std::span<const double> x) { return objective(ScenarioParams::unflatten(x).decode()); };
}

OptResult merge(std::vector<SimplexResult>& runs) {
    OptResult out;
    out.trajectory_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        out.trace.push_back(runs[i].value);
        out.evaluations += runs[i].evaluations;
        out.trajectory_max = std::max(out.trajectory_max, runs[i].trajectory_max);
        if (i == 0 || runs[i].value > runs[out.best_restart].value) out.best_restart = i;
    }
    out.best_value = runs[out.best_restart].value;
    out.best_params = ScenarioParams::unflatten(runs[out.best_restart].x);
    return out;
}

}  // namespace

OptResult maximize(const Objective& objective, const OptConfig& config) {
    if (config.restarts < 1 || config.max_evals < 1 || !(config.tol > 0.0))
        throw PreconditionViolated("optimizer config must be positive");
    const VectorObjective f = lift(objective);
    const int r = config.restarts;
    std::vector<SimplexResult> runs(static_cast<std::size_t>(r));
    std::vector<std::string> errors(static_cast<std::size_t>(r));

    auto one = [&](int i) {
        sampling::Rng rng(config.seed + static_cast<std::uint64_t>(i));
        try {
            runs[i] = nelder_mead_max(f, random_start(rng), 0.4, config.max_evals, config.tol);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };
    if (config.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < r; ++i) one(i);
    } else {
        for (int i = 0; i < r; ++i) one(i);
    }
    for (const auto& e : errors)
        if (!e.empty()) throw NonFiniteObjective(e);
    return merge(runs);
}

OptResult refine(const Objective& objective, const ScenarioParams& start, const OptConfig& config) {
    std::vector<SimplexResult> runs{nelder_mead_max(lift(objective), start.flatten(), 0.1, config.max_evals, config.tol)};
    return merge(runs);
}

double chsh_objective(const qmodel::QuantumScenario& sc) {
    try {
        const auto m = qmodel::moments(sc);
        for (double v : {m.alice.var[0], m.alice.var[1], m.bob.var[0], m.bob.var[1]})
            if (v < 1e-10) return 0.0;
        return m.chsh();
    } catch (const DegenerateData&) {
        return 0.0;
    }
}

Objective eta_penalty_objective(double target, double weight) {
    return [target, weight](const qmodel::QuantumScenario& sc) {
        try {
            const auto m = qmodel::moments(sc);
            for (double v : {m.alice.var[0], m.alice.var[1], m.bob.var[0], m.bob.var[1]})
                if (v < 1e-10) return -weight * target * target;
            const double d = m.alice.eta - target;
            return m.chsh() - weight * d * d;
        } catch (const DegenerateData&) {
            return -weight * target * target;
        }
    };
}

std::vector<EtaPoint> trace_eta_curve(std::span<const double> eta_grid, const OptConfig& config) {
    std::vector<EtaPoint> out;
    for (double eta : eta_grid) {
        if (!(eta >= 0.0 && eta <= 1.0)) throw PreconditionViolated("eta targets must lie in [0, 1]");
        OptResult best = maximize(eta_penalty_objective(eta, 1e3), config);
        for (double w : {1e5, 1e7}) best = refine(eta_penalty_objective(eta, w), best.best_params, config);

        EtaPoint p;
        p.eta = eta;
        p.bound = 2.0 * std::numbers::sqrt2 * std::sqrt(std::max(0.0, 1.0 - eta * eta));
        const auto sc = best.best_params.decode();
        try {
            const auto m = qmodel::moments(sc);
            p.max_chsh = m.chsh();
            p.achieved_eta = m.alice.eta;
        } catch (const DegenerateData&) {
            p.max_chsh = 0.0;
            p.achieved_eta = 0.0;
        }
        p.feasible = std::abs(p.achieved_eta - eta) <= 1e-3;
        out.push_back(p);
    }
    return out;
}

}  // namespace bellri::optimizer
