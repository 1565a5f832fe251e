#include "bellri/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bellri/error.hpp"

namespace bellri {
namespace {

constexpr double kNormalizationTol = 1e-12;
constexpr double kVarianceSignalTol = 1e-9;

struct ContextMoments {
    double mean_a = 0, mean_b = 0, var_a = 0, var_b = 0, cov = 0, corr = 0;
};

ContextMoments context_moments(const ProbabilityTable& pt, int i, int j) {
    const auto& t = pt.p[i][j];
    double ea = 0, eb = 0, ea2 = 0, eb2 = 0, eab = 0;
    for (std::size_t x = 0; x < pt.outcomes_a.size(); ++x) {
        const double a = pt.outcomes_a[x];
        for (std::size_t y = 0; y < pt.outcomes_b.size(); ++y) {
            const double b = pt.outcomes_b[y];
            const double w = t[x][y];
            ea += w * a;
            eb += w * b;
            ea2 += w * a * a;
            eb2 += w * b * b;
            eab += w * a * b;
        }
    }
    ContextMoments m;
    m.mean_a = ea;
    m.mean_b = eb;
    m.var_a = std::max(0.0, ea2 - ea * ea);
    m.var_b = std::max(0.0, eb2 - eb * eb);
    m.cov = eab - ea * eb;
    m.corr = eab;
    return m;
}

bool is_pm1(const std::vector<double>& outcomes) {
    return std::all_of(outcomes.begin(), outcomes.end(), [](double v) { return v == 1.0 || v == -1.0; });
}

std::optional<double> pearson_of(double cov, double va, double vb) {
    if (va <= kZeroVariance || vb <= kZeroVariance) return std::nullopt;
    return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

void check_pearson_entry(double v) {
    if (!std::isfinite(v) || std::abs(v) > 1.0 + 1e-12)
        throw MalformedInput("Pearson entry outside [-1, 1]");
}

}  // namespace

void ProbabilityTable::validate() const {
    if (outcomes_a.empty() || outcomes_b.empty()) throw MalformedInput("outcome lists must be non-empty");
    for (double v : outcomes_a)
        if (!std::isfinite(v)) throw MalformedInput("non-finite outcome value for Alice");
    for (double v : outcomes_b)
        if (!std::isfinite(v)) throw MalformedInput("non-finite outcome value for Bob");
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const auto& t = p[i][j];
            if (t.size() != outcomes_a.size())
                throw MalformedInput("p[" + std::to_string(i) + "][" + std::to_string(j) + "] has wrong row count");
            double total = 0.0;
            for (const auto& row : t) {
                if (row.size() != outcomes_b.size())
                    throw MalformedInput("p[" + std::to_string(i) + "][" + std::to_string(j) +
                                         "] has wrong column count");
                for (double w : row) {
                    if (!std::isfinite(w) || w < 0.0)
                        throw MalformedInput("negative or non-finite probability");
                    total += w;
                }
            }
            if (std::abs(total - 1.0) > kNormalizationTol)
                throw MalformedInput("p[" + std::to_string(i) + "][" + std::to_string(j) + "] does not sum to 1");
        }
}

bool CorrelatorTable::pearson_defined() const {
    for (const auto& row : pearson)
        for (const auto& v : row)
            if (!v) return false;
    return true;
}

Mat2 CorrelatorTable::pearson_values() const {
    Mat2 out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            if (!pearson[i][j])
                throw DegenerateData("Pearson coefficient rho" + std::to_string(i) + std::to_string(j) +
                                     " is undefined (zero variance)");
            out[i][j] = *pearson[i][j];
        }
    return out;
}

CorrelatorTable CorrelatorTable::from_pearson(const Mat2& rho, std::array<double, 2> var_a,
                                              std::array<double, 2> var_b, std::array<double, 2> mean_a,
                                              std::array<double, 2> mean_b) {
    CorrelatorTable ct;
    ct.mean_a = mean_a;
    ct.mean_b = mean_b;
    ct.var_a = var_a;
    ct.var_b = var_b;
    for (int k = 0; k < 2; ++k) {
        for (double v : {var_a[k], var_b[k], mean_a[k], mean_b[k]})
            if (!std::isfinite(v)) throw MalformedInput("non-finite moment");
        if (var_a[k] < 0.0 || var_b[k] < 0.0) throw MalformedInput("negative variance");
    }
    bool binary = true;
    for (int k = 0; k < 2; ++k) {
        binary = binary && std::abs(var_a[k] - (1.0 - mean_a[k] * mean_a[k])) <= 1e-9;
        binary = binary && std::abs(var_b[k] - (1.0 - mean_b[k] * mean_b[k])) <= 1e-9;
    }
    ct.binary_pm1 = binary;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            check_pearson_entry(rho[i][j]);
            const double r = std::clamp(rho[i][j], -1.0, 1.0);
            ct.cov[i][j] = r * std::sqrt(var_a[i] * var_b[j]);
            ct.correlator[i][j] = ct.cov[i][j] + mean_a[i] * mean_b[j];
            if (var_a[i] > kZeroVariance && var_b[j] > kZeroVariance)
                ct.pearson[i][j] = r;
            else
                ct.degenerate = true;
        }
    return ct;
}

CorrelatorTable from_probability_table(const ProbabilityTable& pt) {
    pt.validate();
    CorrelatorTable ct;
    std::array<std::array<ContextMoments, 2>, 2> m{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m[i][j] = context_moments(pt, i, j);

    for (int k = 0; k < 2; ++k) {
        ct.mean_a[k] = m[k][0].mean_a;
        ct.var_a[k] = m[k][0].var_a;
        ct.mean_b[k] = m[0][k].mean_b;
        ct.var_b[k] = m[0][k].var_b;
        if (std::abs(m[k][0].var_a - m[k][1].var_a) > kVarianceSignalTol ||
            std::abs(m[0][k].var_b - m[1][k].var_b) > kVarianceSignalTol)
            ct.signaling_in_variance = true;
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            ct.cov[i][j] = m[i][j].cov;
            ct.correlator[i][j] = m[i][j].corr;
            ct.pearson[i][j] = pearson_of(m[i][j].cov, m[i][j].var_a, m[i][j].var_b);
            if (!ct.pearson[i][j]) ct.degenerate = true;
        }
    ct.binary_pm1 = is_pm1(pt.outcomes_a) && is_pm1(pt.outcomes_b);
    return ct;
}

double chsh(const Mat2& e) { return e[0][0] + e[1][0] + e[0][1] - e[1][1]; }

double chsh(const CorrelatorTable& ct) { return chsh(ct.pearson_values()); }

NoSignalingReport check_no_signaling(const ProbabilityTable& pt, double tol) {
    pt.validate();
    NoSignalingReport rep;
    const std::size_t na = pt.outcomes_a.size();
    const std::size_t nb = pt.outcomes_b.size();
    auto marginal_a = [&](int i, int j, std::size_t x) {
        double s = 0;
        for (std::size_t y = 0; y < nb; ++y) s += pt.p[i][j][x][y];
        return s;
    };
    auto marginal_b = [&](int i, int j, std::size_t y) {
        double s = 0;
        for (std::size_t x = 0; x < na; ++x) s += pt.p[i][j][x][y];
        return s;
    };
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (std::size_t x = 0; x < na; ++x) {
            const double d = std::abs(marginal_a(i, 0, x) - marginal_a(i, 1, x));
            rep.max_discrepancy_a = std::max(rep.max_discrepancy_a, d);
            if (d > worst) {
                worst = d;
                std::ostringstream os;
                os << "alice setting " << i << " outcome " << pt.outcomes_a[x];
                rep.location = os.str();
            }
        }
    for (int j = 0; j < 2; ++j)
        for (std::size_t y = 0; y < nb; ++y) {
            const double d = std::abs(marginal_b(0, j, y) - marginal_b(1, j, y));
            rep.max_discrepancy_b = std::max(rep.max_discrepancy_b, d);
            if (d > worst) {
                worst = d;
                std::ostringstream os;
                os << "bob setting " << j << " outcome " << pt.outcomes_b[y];
                rep.location = os.str();
            }
        }
    rep.pass = rep.max_discrepancy_a <= tol && rep.max_discrepancy_b <= tol;
    return rep;
}

void TripartiteCorrelatorTable::validate() const {
    for (const Mat2* m : {&ab, &ac, &bc})
        for (const auto& row : *m)
            for (double v : row) check_pearson_entry(v);
    for (const auto* v : {&var_a, &var_b, &var_c})
        for (double x : *v)
            if (!std::isfinite(x) || x <= kZeroVariance) throw DegenerateData("tripartite variance must be positive");
}

ProbabilityTable pr_box_probability_table() {
    ProbabilityTable pt;
    pt.outcomes_a = {-1.0, 1.0};
    pt.outcomes_b = {-1.0, 1.0};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double target = (i * j == 1) ? -1.0 : 1.0;
            pt.p[i][j] = {{0.0, 0.0}, {0.0, 0.0}};
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    if (pt.outcomes_a[x] * pt.outcomes_b[y] == target) pt.p[i][j][x][y] = 0.5;
        }
    return pt;
}

ProbabilityTable uniform_probability_table() {
    ProbabilityTable pt;
    pt.outcomes_a = {-1.0, 1.0};
    pt.outcomes_b = {-1.0, 1.0};
    for (auto& row : pt.p)
        for (auto& t : row) t = {{0.25, 0.25}, {0.25, 0.25}};
    return pt;
}

CorrelatorTable tsirelson_table() {
    const double h = 1.0 / std::sqrt(2.0);
    return CorrelatorTable::from_pearson({{{h, h}, {h, -h}}});
}

CorrelatorTable pr_box_table() { return from_probability_table(pr_box_probability_table()); }

CorrelatorTable zero_table() { return CorrelatorTable::from_pearson({{{0.0, 0.0}, {0.0, 0.0}}}); }

}  // namespace bellri
