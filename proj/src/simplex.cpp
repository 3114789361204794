#include "stoba/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stoba::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kRatioTieTol = 1e-12;
constexpr double kPhase1Tol = 1e-7;

enum class ColKind { Fixed, Shifted, Mirrored, Split };

struct ColMap {
    ColKind kind = ColKind::Shifted;
    int col = -1;       // primary structural column
    int col_neg = -1;   // second column for split variables
    double shift = 0.0; // fixed value / lower bound / upper bound (mirrored)
};

struct StdRow {
    std::vector<std::pair<int, double>> terms;
    Rel rel = Rel::LE;
    double rhs = 0.0;
};

}  // namespace

SimplexResult solve_simplex(const SimplexProblem& prob, long max_iter) {
    const int nv = prob.nvars;
    SimplexResult res;

    // --- Presolve: singleton rows become variable bounds. ---
    std::vector<double> lo(nv), up(nv, kInf);
    for (int k = 0; k < nv; ++k)
        lo[k] = prob.free_var.size() > static_cast<size_t>(k) && prob.free_var[k] ? -kInf : 0.0;

    std::vector<uint8_t> row_used(prob.rows.size(), 1);
    for (size_t r = 0; r < prob.rows.size(); ++r) {
        const auto& row = prob.rows[r];
        int nz = 0, var = -1;
        double coef = 0.0;
        for (auto [k, a] : row.terms)
            if (a != 0.0) { ++nz; var = k; coef = a; }
        if (nz != 1) continue;
        double b = row.rhs / coef;
        Rel rel = row.rel;
        if (coef < 0.0 && rel != Rel::EQ) rel = rel == Rel::LE ? Rel::GE : Rel::LE;
        if (rel == Rel::LE || rel == Rel::EQ) up[var] = std::min(up[var], b);
        if (rel == Rel::GE || rel == Rel::EQ) lo[var] = std::max(lo[var], b);
        row_used[r] = 0;
    }
    for (int k = 0; k < nv; ++k)
        if (lo[k] > up[k] + 1e-9) {
            res.status = SimplexStatus::Infeasible;
            return res;
        }

    // --- Column transforms: everything becomes a nonnegative variable. ---
    std::vector<ColMap> cmap(nv);
    int ncols_struct = 0;
    std::vector<std::pair<int, double>> upper_rows;  // (column, bound) residual upper bounds
    for (int k = 0; k < nv; ++k) {
        ColMap& m = cmap[k];
        if (up[k] - lo[k] <= 0.0) {  // pinched by bounds (includes equalities)
            m.kind = ColKind::Fixed;
            m.shift = lo[k];
        } else if (lo[k] > -kInf) {
            m.kind = ColKind::Shifted;
            m.col = ncols_struct++;
            m.shift = lo[k];
            if (up[k] < kInf) upper_rows.emplace_back(m.col, up[k] - lo[k]);
        } else if (up[k] < kInf) {
            m.kind = ColKind::Mirrored;
            m.col = ncols_struct++;
            m.shift = up[k];
        } else {
            m.kind = ColKind::Split;
            m.col = ncols_struct++;
            m.col_neg = ncols_struct++;
        }
    }

    auto transform_row = [&](const std::vector<std::pair<int, double>>& terms, Rel rel,
                             double rhs) {
        StdRow out;
        out.rel = rel;
        out.rhs = rhs;
        for (auto [k, a] : terms) {
            if (a == 0.0) continue;
            const ColMap& m = cmap[k];
            switch (m.kind) {
                case ColKind::Fixed: out.rhs -= a * m.shift; break;
                case ColKind::Shifted:
                    out.terms.emplace_back(m.col, a);
                    out.rhs -= a * m.shift;
                    break;
                case ColKind::Mirrored:
                    out.terms.emplace_back(m.col, -a);
                    out.rhs -= a * m.shift;
                    break;
                case ColKind::Split:
                    out.terms.emplace_back(m.col, a);
                    out.terms.emplace_back(m.col_neg, -a);
                    break;
            }
        }
        if (out.rhs < 0.0) {
            for (auto& t : out.terms) t.second = -t.second;
            out.rhs = -out.rhs;
            if (out.rel != Rel::EQ) out.rel = out.rel == Rel::LE ? Rel::GE : Rel::LE;
        }
        return out;
    };

    std::vector<StdRow> rows;
    rows.reserve(prob.rows.size() + upper_rows.size());
    for (size_t r = 0; r < prob.rows.size(); ++r)
        if (row_used[r])
            rows.push_back(transform_row(prob.rows[r].terms, prob.rows[r].rel, prob.rows[r].rhs));
    for (auto [c, b] : upper_rows)
        rows.push_back(StdRow{{{c, 1.0}}, Rel::LE, b});

    const int m = static_cast<int>(rows.size());
    int nslack = 0, nart = 0;
    for (const auto& r : rows) {
        if (r.rel != Rel::EQ) ++nslack;              // slack or surplus
        if (r.rel != Rel::LE) ++nart;                // GE and EQ need an artificial
    }
    const int ncols = ncols_struct + nslack + nart;
    const int W = ncols + 1;  // trailing column holds the rhs

    std::vector<double> T(static_cast<size_t>(m) * W, 0.0);
    std::vector<int> basis(m, -1);
    std::vector<uint8_t> active(m, 1), is_art(ncols, 0);
    {
        int next_slack = ncols_struct, next_art = ncols_struct + nslack;
        for (int i = 0; i < m; ++i) {
            double* row = &T[static_cast<size_t>(i) * W];
            for (auto [c, a] : rows[i].terms) row[c] += a;
            row[ncols] = rows[i].rhs;
            if (rows[i].rel == Rel::LE) {
                row[next_slack] = 1.0;
                basis[i] = next_slack++;
            } else if (rows[i].rel == Rel::GE) {
                row[next_slack++] = -1.0;
                row[next_art] = 1.0;
                is_art[next_art] = 1;
                basis[i] = next_art++;
            } else {
                row[next_art] = 1.0;
                is_art[next_art] = 1;
                basis[i] = next_art++;
            }
        }
    }

    std::vector<double> zrow(W, 0.0);
    auto rebuild_zrow = [&](const std::vector<double>& cost) {
        for (int j = 0; j <= ncols; ++j) zrow[j] = j < ncols ? -cost[j] : 0.0;
        for (int i = 0; i < m; ++i) {
            if (!active[i]) continue;
            double cb = cost[basis[i]];
            if (cb == 0.0) continue;
            const double* row = &T[static_cast<size_t>(i) * W];
            for (int j = 0; j <= ncols; ++j) zrow[j] += cb * row[j];
        }
    };

    auto pivot = [&](int r, int c) {
        double* prow = &T[static_cast<size_t>(r) * W];
        double inv = 1.0 / prow[c];
        for (int j = 0; j <= ncols; ++j) prow[j] *= inv;
        prow[c] = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i == r || !active[i]) continue;
            double* row = &T[static_cast<size_t>(i) * W];
            double a = row[c];
            if (a == 0.0) continue;
            for (int j = 0; j <= ncols; ++j) row[j] -= a * prow[j];
            row[c] = 0.0;
        }
        double a = zrow[c];
        if (a != 0.0) {
            for (int j = 0; j <= ncols; ++j) zrow[j] -= a * prow[j];
            zrow[c] = 0.0;
        }
        basis[r] = c;
    };

    long iterations = 0;
    auto run_phase = [&](bool ban_artificials) -> SimplexStatus {
        for (;;) {
            int enter = -1;  // Bland: smallest improving index
            for (int j = 0; j < ncols; ++j) {
                if (ban_artificials && is_art[j]) continue;
                if (zrow[j] < -kCostTol) { enter = j; break; }
            }
            if (enter < 0) return SimplexStatus::Optimal;
            int leave = -1;
            double best = kInf;
            for (int i = 0; i < m; ++i) {
                if (!active[i]) continue;
                double a = T[static_cast<size_t>(i) * W + enter];
                if (a <= kPivotTol) continue;
                double ratio = T[static_cast<size_t>(i) * W + ncols] / a;
                if (ratio < best - kRatioTieTol ||
                    (ratio < best + kRatioTieTol && (leave < 0 || basis[i] < basis[leave])))
                    { best = ratio; leave = i; }
            }
            if (leave < 0) return SimplexStatus::Unbounded;
            pivot(leave, enter);
            if (++iterations > max_iter) return SimplexStatus::IterationLimit;
        }
    };

    if (nart > 0) {
        std::vector<double> cost1(ncols, 0.0);
        for (int j = 0; j < ncols; ++j)
            if (is_art[j]) cost1[j] = -1.0;
        rebuild_zrow(cost1);
        SimplexStatus s1 = run_phase(false);
        if (s1 == SimplexStatus::IterationLimit) {
            res.status = s1;
            res.iterations = iterations;
            return res;
        }
        double infeas = 0.0;
        for (int i = 0; i < m; ++i)
            if (active[i] && is_art[basis[i]])
                infeas += T[static_cast<size_t>(i) * W + ncols];
        if (infeas > kPhase1Tol) {
            res.status = SimplexStatus::Infeasible;
            res.iterations = iterations;
            return res;
        }
        // Pivot leftover artificials out; rows without any eligible pivot are redundant.
        for (int i = 0; i < m; ++i) {
            if (!active[i] || !is_art[basis[i]]) continue;
            int c = -1;
            for (int j = 0; j < ncols && c < 0; ++j)
                if (!is_art[j] && std::abs(T[static_cast<size_t>(i) * W + j]) > kPhase1Tol)
                    c = j;
            if (c >= 0) { pivot(i, c); ++iterations; }
            else active[i] = 0;
        }
    }

    std::vector<double> cost2(ncols, 0.0);
    for (int k = 0; k < nv; ++k) {
        double c = k < static_cast<int>(prob.objective.size()) ? prob.objective[k] : 0.0;
        if (c == 0.0) continue;
        const ColMap& mm = cmap[k];
        switch (mm.kind) {
            case ColKind::Fixed: break;
            case ColKind::Shifted: cost2[mm.col] += c; break;
            case ColKind::Mirrored: cost2[mm.col] -= c; break;
            case ColKind::Split:
                cost2[mm.col] += c;
                cost2[mm.col_neg] -= c;
                break;
        }
    }
    rebuild_zrow(cost2);
    SimplexStatus s2 = run_phase(true);
    res.iterations = iterations;
    if (s2 != SimplexStatus::Optimal) {
        res.status = s2;
        return res;
    }

    std::vector<double> xs(ncols, 0.0);
    for (int i = 0; i < m; ++i)
        if (active[i]) xs[basis[i]] = T[static_cast<size_t>(i) * W + ncols];
    res.x.assign(nv, 0.0);
    for (int k = 0; k < nv; ++k) {
        const ColMap& mm = cmap[k];
        switch (mm.kind) {
            case ColKind::Fixed: res.x[k] = mm.shift; break;
            case ColKind::Shifted: res.x[k] = mm.shift + xs[mm.col]; break;
            case ColKind::Mirrored: res.x[k] = mm.shift - xs[mm.col]; break;
            case ColKind::Split: res.x[k] = xs[mm.col] - xs[mm.col_neg]; break;
        }
    }
    res.objective = 0.0;
    for (int k = 0; k < nv && k < static_cast<int>(prob.objective.size()); ++k)
        res.objective += prob.objective[k] * res.x[k];
    res.status = SimplexStatus::Optimal;
    return res;
}

}  // namespace stoba::detail
