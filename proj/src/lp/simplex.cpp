#include "coldchain/lp/simplex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "lu.hpp"

namespace coldchain::lp {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration_limit";
  }
  return "?";
}

namespace {

enum VStat : std::uint8_t { kAtLower = 0, kAtUpper = 1, kFree = 2, kBasic = 3 };

struct Eta {
  int pos = -1;
  double pivot = 0.0;
  std::vector<std::pair<int, double>> entries;  // by basis position, excludes pos
};

// Scaled working copy plus simplex state. Variables 0..n-1 are structural,
// n..n+m-1 are the row logicals (row activity + logical = rhs).
struct Worker {
  const LinearProgram& prob;
  const SolverOptions& opts;
  int n, m, N;

  std::vector<double> aval;                // scaled matrix values (CSC pattern shared)
  std::vector<double> row_scale, col_scale;
  std::vector<double> cost, lb, ub, rhs;   // scaled; cost/lb/ub sized N

  std::vector<std::uint8_t> stat;          // VStat per variable
  std::vector<int> basic;                  // position -> variable
  std::vector<int> pos_of;                 // variable -> position or -1
  std::vector<double> xB;                  // by position

  LuFactor lu;
  std::vector<Eta> etas;
  int pivots_since_factor = 0;

  // scratch
  std::vector<double> work_row;            // dense, size m
  std::vector<double> ftran_pos;           // by position
  std::vector<double> y;                   // duals by row
  std::vector<double> cB;                  // by position

  std::int64_t iterations = 0;
  int degenerate_streak = 0;
  bool bland = false;
  int price_cursor = 0;

  Worker(const LinearProgram& p, const SolverOptions& o)
      : prob(p), opts(o), n(p.num_cols), m(p.num_rows), N(n + m) {}

  double structural_entry(std::int64_t k) const { return aval[k]; }

  // -- scaling ---------------------------------------------------------------

  void compute_scaling() {
    row_scale.assign(m, 1.0);
    col_scale.assign(n, 1.0);
    aval.assign(prob.value.begin(), prob.value.end());
    if (!opts.scale || prob.nonzeros() == 0) {
      rescale_arrays();
      return;
    }
    // geometric-mean equilibration, alternating columns and rows
    for (int pass = 0; pass < 3; ++pass) {
      for (int j = 0; j < n; ++j) {
        double lo = kInf, hi = 0.0;
        for (std::int64_t k = prob.col_ptr[j]; k < prob.col_ptr[j + 1]; ++k) {
          const double a = std::fabs(aval[k]);
          if (a > 0) { lo = std::min(lo, a); hi = std::max(hi, a); }
        }
        if (hi > 0.0) {
          const double s = 1.0 / std::sqrt(lo * hi);
          if (s > 1e-8 && s < 1e8) {
            col_scale[j] *= s;
            for (std::int64_t k = prob.col_ptr[j]; k < prob.col_ptr[j + 1]; ++k) aval[k] *= s;
          }
        }
      }
      std::vector<double> rlo(m, kInf), rhi(m, 0.0);
      for (int j = 0; j < n; ++j)
        for (std::int64_t k = prob.col_ptr[j]; k < prob.col_ptr[j + 1]; ++k) {
          const double a = std::fabs(aval[k]);
          if (a > 0) {
            rlo[prob.row_index[k]] = std::min(rlo[prob.row_index[k]], a);
            rhi[prob.row_index[k]] = std::max(rhi[prob.row_index[k]], a);
          }
        }
      std::vector<double> rs(m, 1.0);
      for (int r = 0; r < m; ++r)
        if (rhi[r] > 0.0) {
          const double s = 1.0 / std::sqrt(rlo[r] * rhi[r]);
          if (s > 1e-8 && s < 1e8) rs[r] = s;
        }
      for (int r = 0; r < m; ++r) row_scale[r] *= rs[r];
      for (int j = 0; j < n; ++j)
        for (std::int64_t k = prob.col_ptr[j]; k < prob.col_ptr[j + 1]; ++k)
          aval[k] *= rs[prob.row_index[k]];
    }
    rescale_arrays();
  }

  void rescale_arrays() {
    cost.assign(N, 0.0);
    lb.assign(N, 0.0);
    ub.assign(N, 0.0);
    rhs.assign(m, 0.0);
    for (int j = 0; j < n; ++j) {
      cost[j] = prob.objective[j] * col_scale[j];
      lb[j] = prob.col_lb[j] == -kInf ? -kInf : prob.col_lb[j] / col_scale[j];
      ub[j] = prob.col_ub[j] == kInf ? kInf : prob.col_ub[j] / col_scale[j];
    }
    for (int r = 0; r < m; ++r) {
      rhs[r] = prob.rhs[r] * row_scale[r];
      const int j = n + r;
      switch (prob.sense[r]) {
        case RowSense::LE: lb[j] = 0.0; ub[j] = kInf; break;
        case RowSense::GE: lb[j] = -kInf; ub[j] = 0.0; break;
        case RowSense::EQ: lb[j] = 0.0; ub[j] = 0.0; break;
      }
      if (lb[j] != -kInf) lb[j] *= row_scale[r];
      if (ub[j] != kInf && ub[j] != 0.0) ub[j] *= row_scale[r];
    }
  }

  // -- basis machinery --------------------------------------------------------

  double nonbasic_value(int j) const {
    switch (stat[j]) {
      case kAtLower: return lb[j];
      case kAtUpper: return ub[j];
      default: return 0.0;
    }
  }

  void default_nonbasic_stat(int j) {
    if (lb[j] == ub[j]) stat[j] = kAtLower;
    else if (lb[j] != -kInf) stat[j] = kAtLower;
    else if (ub[j] != kInf) stat[j] = kAtUpper;
    else stat[j] = kFree;
  }

  void crash_basis() {
    stat.assign(N, kAtLower);
    for (int j = 0; j < N; ++j) default_nonbasic_stat(j);
    basic.assign(m, -1);
    pos_of.assign(N, -1);
    for (int r = 0; r < m; ++r) set_basic(n + r, r);

    // residuals the logicals would carry
    std::vector<double> resid = rhs;
    for (int j = 0; j < n; ++j) {
      const double v = nonbasic_value(j);
      if (v != 0.0)
        for (std::int64_t k = prob.col_ptr[j]; k < prob.col_ptr[j + 1]; ++k)
          resid[prob.row_index[k]] -= aval[k] * v;
    }
    // structural singleton columns rescue rows whose logical starts outside
    // its bounds (typically equality rows with nonzero rhs)
    for (int j = 0; j < n; ++j) {
      if (prob.col_ptr[j + 1] - prob.col_ptr[j] != 1) continue;
      const std::int64_t k = prob.col_ptr[j];
      const int r = prob.row_index[k];
      const int logical = n + r;
      if (basic[r] != logical) continue;
      const double s = resid[r];
      if (s >= lb[logical] - opts.tol_feas && s <= ub[logical] + opts.tol_feas) continue;
      const double a = aval[k];
      if (std::fabs(a) < 1e-10) continue;
      const double v = s / a;
      if (v < lb[j] - opts.tol_feas || v > ub[j] + opts.tol_feas) continue;
      default_nonbasic_stat(logical);
      stat[logical] = (ub[logical] == 0.0 && lb[logical] == -kInf) ? kAtUpper : kAtLower;
      pos_of[logical] = -1;
      set_basic(j, r);
    }
  }

  void set_basic(int var, int pos) {
    basic[pos] = var;
    pos_of[var] = pos;
    stat[var] = kBasic;
  }

  bool load_warm(const Basis& w) {
    if (static_cast<int>(w.basic.size()) != m ||
        static_cast<int>(w.at_upper.size()) != N)
      return false;
    stat.assign(N, kAtLower);
    basic.assign(m, -1);
    pos_of.assign(N, -1);
    std::vector<char> seen(N, 0);
    for (int p = 0; p < m; ++p) {
      const int v = w.basic[p];
      if (v < 0 || v >= N || seen[v]) return false;
      seen[v] = 1;
      set_basic(v, p);
    }
    for (int j = 0; j < N; ++j) {
      if (stat[j] == kBasic) continue;
      if (w.at_upper[j] && ub[j] != kInf) stat[j] = kAtUpper;
      else default_nonbasic_stat(j);
    }
    return true;
  }

  bool factorize() {
    std::vector<std::int64_t> cstart(m + 1, 0);
    std::vector<int> crows;
    std::vector<double> cvals;
    crows.reserve(static_cast<std::size_t>(m) * 2);
    cvals.reserve(crows.capacity());
    for (int p = 0; p < m; ++p) {
      const int v = basic[p];
      if (v < n) {
        for (std::int64_t k = prob.col_ptr[v]; k < prob.col_ptr[v + 1]; ++k) {
          crows.push_back(prob.row_index[k]);
          cvals.push_back(aval[k]);
        }
      } else {
        crows.push_back(v - n);
        cvals.push_back(1.0);
      }
      cstart[p + 1] = static_cast<std::int64_t>(crows.size());
    }
    const auto repairs = lu.factorize(m, cstart, crows, cvals);
    for (const auto& [pos, row] : repairs) {
      const int old = basic[pos];
      pos_of[old] = -1;
      default_nonbasic_stat(old);
      set_basic(n + row, pos);
    }
    etas.clear();
    pivots_since_factor = 0;
    if (!repairs.empty()) return factorize();  // repaired basis is nonsingular
    return true;
  }

  void compute_xB() {
    work_row.assign(m, 0.0);
    for (int r = 0; r < m; ++r) work_row[r] = rhs[r];
    for (int j = 0; j < N; ++j) {
      if (stat[j] == kBasic) continue;
      const double v = nonbasic_value(j);
      if (v == 0.0) continue;
      if (j < n) {
        for (std::int64_t k = prob.col_ptr[j]; k < prob.col_ptr[j + 1]; ++k)
          work_row[prob.row_index[k]] -= aval[k] * v;
      } else {
        work_row[j - n] -= v;
      }
    }
    lu.ftran(work_row, ftran_pos);
    xB = ftran_pos;
    apply_etas_ftran(xB);
  }

  void apply_etas_ftran(std::vector<double>& x) const {
    for (const auto& e : etas) {
      const double t = x[e.pos] / e.pivot;
      if (t != 0.0)
        for (const auto& [i, a] : e.entries) x[i] -= a * t;
      x[e.pos] = t;
    }
  }

  void apply_etas_btran(std::vector<double>& c) const {
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double acc = c[it->pos];
      for (const auto& [i, a] : it->entries) acc -= a * c[i];
      c[it->pos] = acc / it->pivot;
    }
  }

  // alpha = B^{-1} A_q, by basis position
  void ftran_column(int q, std::vector<double>& alpha) {
    work_row.assign(m, 0.0);
    if (q < n) {
      for (std::int64_t k = prob.col_ptr[q]; k < prob.col_ptr[q + 1]; ++k)
        work_row[prob.row_index[k]] = aval[k];
    } else {
      work_row[q - n] = 1.0;
    }
    lu.ftran(work_row, alpha);
    apply_etas_ftran(alpha);
  }

  // y = B^{-T} c_B
  void btran_costs(const std::vector<double>& cb, std::vector<double>& y_out) {
    std::vector<double> c = cb;
    apply_etas_btran(c);
    lu.btran(c, y_out);
  }

  double reduced_cost(int j, const std::vector<double>& yv, bool phase2) const {
    double d = phase2 && j < n ? cost[j] : 0.0;
    if (j < n) {
      for (std::int64_t k = prob.col_ptr[j]; k < prob.col_ptr[j + 1]; ++k)
        d -= yv[prob.row_index[k]] * aval[k];
    } else {
      d -= yv[j - n];
    }
    return d;
  }

  // -- pricing ----------------------------------------------------------------

  struct Candidate {
    int var = -1;
    double d = 0.0;
    int dir = 0;  // +1 increase, -1 decrease
  };

  bool eligible(int j, double d, int& dir) const {
    if (stat[j] == kBasic) return false;
    if (lb[j] == ub[j]) return false;  // fixed
    const double tol = opts.tol_dual;
    switch (stat[j]) {
      case kAtLower:
        if (d > tol) { dir = 1; return true; }
        return false;
      case kAtUpper:
        if (d < -tol) { dir = -1; return true; }
        return false;
      case kFree:
        if (d > tol) { dir = 1; return true; }
        if (d < -tol) { dir = -1; return true; }
        return false;
      default: return false;
    }
  }

  Candidate price(const std::vector<double>& yv, bool phase2) {
    Candidate best;
    if (bland) {
      for (int j = 0; j < N; ++j) {
        int dir;
        const double d = reduced_cost(j, yv, phase2);
        if (eligible(j, d, dir)) return {j, d, dir};
      }
      return best;
    }
    const bool partial = N > 60000;
    const int blocks = partial ? 32 : 1;
    const int block_len = (N + blocks - 1) / blocks;
    for (int b = 0; b < blocks; ++b) {
      const int blk = (price_cursor + b) % blocks;
      const int jmax = std::min(N, (blk + 1) * block_len);
      double best_mag = 0.0;
      for (int j = blk * block_len; j < jmax; ++j) {
        int dir;
        const double d = reduced_cost(j, yv, phase2);
        if (!eligible(j, d, dir)) continue;
        const double mag = std::fabs(d);
        if (mag > best_mag) {
          best_mag = mag;
          best = {j, d, dir};
        }
      }
      if (best.var >= 0) {
        price_cursor = blk;
        return best;
      }
    }
    return best;
  }

  // -- ratio test ---------------------------------------------------------------

  struct Ratio {
    int pos = -1;        // leaving basis position, -1 for entering bound flip
    double step = 0.0;
    int leave_to = 0;    // kAtLower/kAtUpper for the leaving variable
    bool unbounded = false;
  };

  Ratio ratio_test(int q, int dir, const std::vector<double>& alpha, bool phase1) {
    const double tolf = opts.tol_feas;
    Ratio out;
    double limit = kInf;  // entering variable's own range
    if (lb[q] != -kInf && ub[q] != kInf) limit = ub[q] - lb[q];

    // pass 1: relaxed minimum with feasibility tolerance
    double relaxed = limit + tolf;
    for (int p = 0; p < m; ++p) {
      const double a = alpha[p];
      if (std::fabs(a) < 1e-11) continue;
      const double rate = -dir * a;  // d xB[p] / d step
      const int v = basic[p];
      double bound;
      if (phase1) {
        // infeasible basics block at the bound they are approaching from
        // outside; feasible basics block at the bound ahead
        if (xB[p] < lb[v] - tolf) {
          if (rate <= 0) continue;      // moving away: accounted in the gradient
          bound = lb[v];
        } else if (xB[p] > ub[v] + tolf) {
          if (rate >= 0) continue;
          bound = ub[v];
        } else {
          bound = rate > 0 ? ub[v] : lb[v];
          if (bound == kInf || bound == -kInf) continue;
        }
      } else {
        bound = rate > 0 ? ub[v] : lb[v];
        if (bound == kInf || bound == -kInf) continue;
      }
      const double r = (bound - xB[p] + (rate > 0 ? tolf : -tolf)) / rate;
      relaxed = std::min(relaxed, r);
    }

    // pass 2: among blockers within the relaxed step, take the largest pivot
    int best_pos = -1;
    double best_mag = 0.0, best_exact = 0.0;
    int best_leave = kAtLower;
    for (int p = 0; p < m; ++p) {
      const double a = alpha[p];
      if (std::fabs(a) < 1e-11) continue;
      const double rate = -dir * a;
      const int v = basic[p];
      double bound;
      int leave_to;
      if (phase1) {
        if (xB[p] < lb[v] - tolf) {
          if (rate <= 0) continue;
          bound = lb[v];
          leave_to = kAtLower;
        } else if (xB[p] > ub[v] + tolf) {
          if (rate >= 0) continue;
          bound = ub[v];
          leave_to = kAtUpper;
        } else {
          if (rate > 0) { bound = ub[v]; leave_to = kAtUpper; }
          else { bound = lb[v]; leave_to = kAtLower; }
          if (bound == kInf || bound == -kInf) continue;
        }
      } else {
        if (rate > 0) { bound = ub[v]; leave_to = kAtUpper; }
        else { bound = lb[v]; leave_to = kAtLower; }
        if (bound == kInf || bound == -kInf) continue;
      }
      const double exact = (bound - xB[p]) / rate;
      if (exact <= relaxed) {
        const double mag = std::fabs(a);
        const bool better =
            bland ? (best_pos == -1 || exact < best_exact ||
                     (exact == best_exact && p < best_pos))
                  : (best_pos == -1 || mag > best_mag);
        if (better) {
          best_pos = p;
          best_mag = mag;
          best_exact = exact;
          best_leave = leave_to;
        }
      }
    }

    if (best_pos == -1) {
      if (limit == kInf) {
        out.unbounded = true;
        return out;
      }
      out.pos = -1;
      out.step = limit;  // bound flip
      return out;
    }
    if (limit <= best_exact) {
      out.pos = -1;
      out.step = limit;
      return out;
    }
    out.pos = best_pos;
    out.step = std::max(0.0, best_exact);
    out.leave_to = best_leave;
    return out;
  }

  // -- iteration ---------------------------------------------------------------

  void pivot(int q, int dir, const Ratio& r, const std::vector<double>& alpha) {
    const double step = r.step;
    if (r.pos < 0) {
      // bound flip: entering moves across its range, basis unchanged
      for (int p = 0; p < m; ++p) {
        if (alpha[p] != 0.0) xB[p] -= dir * step * alpha[p];
      }
      stat[q] = (stat[q] == kAtLower) ? kAtUpper : kAtLower;
      return;
    }
    const int leave = basic[r.pos];
    const double enter_val = nonbasic_value(q) + dir * step;
    for (int p = 0; p < m; ++p) {
      if (p == r.pos || alpha[p] == 0.0) continue;
      xB[p] -= dir * step * alpha[p];
    }
    pos_of[leave] = -1;
    stat[leave] = static_cast<std::uint8_t>(r.leave_to == kAtUpper ? kAtUpper : kAtLower);
    if (lb[leave] == -kInf && ub[leave] == kInf) stat[leave] = kFree;
    set_basic(q, r.pos);
    xB[r.pos] = enter_val;

    Eta e;
    e.pos = r.pos;
    e.pivot = alpha[r.pos];
    for (int p = 0; p < m; ++p)
      if (p != r.pos && std::fabs(alpha[p]) > 1e-12) e.entries.emplace_back(p, alpha[p]);
    etas.push_back(std::move(e));
    ++pivots_since_factor;
  }

  double infeasibility_sum() const {
    double s = 0.0;
    for (int p = 0; p < m; ++p) {
      const int v = basic[p];
      if (xB[p] < lb[v]) s += lb[v] - xB[p];
      else if (xB[p] > ub[v]) s += xB[p] - ub[v];
    }
    return s;
  }

  int count_infeasible() const {
    int c = 0;
    for (int p = 0; p < m; ++p) {
      const int v = basic[p];
      if (xB[p] < lb[v] - opts.tol_feas || xB[p] > ub[v] + opts.tol_feas) ++c;
    }
    return c;
  }
};

} // namespace

LpSolution solve(const LinearProgram& lp, const SolverOptions& options, const Basis* warm) {
  const auto t0 = std::chrono::steady_clock::now();
  LpSolution sol;
  Worker w(lp, options);
  const std::int64_t max_iters =
      options.max_iters > 0 ? options.max_iters
                            : 200000 + 40LL * (lp.num_rows + lp.num_cols);

  w.compute_scaling();
  bool warm_ok = false;
  if (warm && !warm->empty()) warm_ok = w.load_warm(*warm);
  if (!warm_ok) w.crash_basis();
  w.factorize();
  w.compute_xB();

  const int refactor_every =
      std::max(options.refactor_interval, w.m > 20000 ? 300 : options.refactor_interval);

  std::vector<double> alpha, yv;
  bool phase2 = w.count_infeasible() == 0;
  std::int64_t stalled_checks = 0;

  auto refactor_and_recompute = [&]() {
    w.factorize();
    w.compute_xB();
  };

  while (true) {
    if (w.iterations >= max_iters) {
      sol.status = SolveStatus::IterationLimit;
      break;
    }
    if (w.pivots_since_factor >= refactor_every) refactor_and_recompute();

    if (!phase2 && w.count_infeasible() == 0) {
      phase2 = true;
      w.bland = false;
      w.degenerate_streak = 0;
    }

    // objective gradient: phase 1 drives basic infeasibilities to zero
    w.cB.assign(w.m, 0.0);
    if (phase2) {
      for (int p = 0; p < w.m; ++p) {
        const int v = w.basic[p];
        w.cB[p] = v < w.n ? w.cost[v] : 0.0;
      }
    } else {
      for (int p = 0; p < w.m; ++p) {
        const int v = w.basic[p];
        if (w.xB[p] < w.lb[v] - options.tol_feas) w.cB[p] = 1.0;
        else if (w.xB[p] > w.ub[v] + options.tol_feas) w.cB[p] = -1.0;
      }
    }
    w.btran_costs(w.cB, yv);

    auto cand = w.price(yv, phase2);
    if (cand.var < 0) {
      // confirm on a fresh factorization before declaring a verdict
      if (!w.etas.empty()) {
        refactor_and_recompute();
        w.cB.assign(w.m, 0.0);
        if (phase2) {
          for (int p = 0; p < w.m; ++p)
            w.cB[p] = w.basic[p] < w.n ? w.cost[w.basic[p]] : 0.0;
        } else {
          for (int p = 0; p < w.m; ++p) {
            const int v = w.basic[p];
            if (w.xB[p] < w.lb[v] - options.tol_feas) w.cB[p] = 1.0;
            else if (w.xB[p] > w.ub[v] + options.tol_feas) w.cB[p] = -1.0;
          }
        }
        w.btran_costs(w.cB, yv);
        cand = w.price(yv, phase2);
        if (cand.var >= 0) continue;
      }
      if (!phase2) {
        sol.status = SolveStatus::Infeasible;
        for (int r = 0; r < w.m; ++r)
          if (std::fabs(yv[r]) > options.tol_dual) sol.infeasible_rows.push_back(r);
        if (sol.infeasible_rows.empty()) {
          for (int p = 0; p < w.m; ++p) {
            const int v = w.basic[p];
            if (w.xB[p] < w.lb[v] - options.tol_feas || w.xB[p] > w.ub[v] + options.tol_feas) {
              if (v >= w.n) sol.infeasible_rows.push_back(v - w.n);
            }
          }
        }
      } else {
        sol.status = SolveStatus::Optimal;
      }
      break;
    }

    w.ftran_column(cand.var, alpha);
    auto ratio = w.ratio_test(cand.var, cand.dir, alpha, !phase2);
    if (ratio.unbounded) {
      if (!phase2) {
        // phase-1 objective is bounded; this is a numerical dead end
        refactor_and_recompute();
        if (++stalled_checks > 5) {
          sol.status = SolveStatus::IterationLimit;
          break;
        }
        continue;
      }
      sol.status = SolveStatus::Unbounded;
      sol.ray.assign(w.n, 0.0);
      if (cand.var < w.n) sol.ray[cand.var] = cand.dir * w.col_scale[cand.var];
      for (int p = 0; p < w.m; ++p) {
        const int v = w.basic[p];
        if (v < w.n && alpha[p] != 0.0)
          sol.ray[v] = -cand.dir * alpha[p] * w.col_scale[v];
      }
      break;
    }

    if (ratio.pos >= 0 && std::fabs(alpha[ratio.pos]) < options.tol_pivot) {
      refactor_and_recompute();
      if (++stalled_checks > 50) {
        sol.status = SolveStatus::IterationLimit;
        break;
      }
      continue;
    }
    stalled_checks = 0;

    w.pivot(cand.var, cand.dir, ratio, alpha);
    ++w.iterations;

    if (ratio.step <= 1e-10) {
      if (++w.degenerate_streak >= options.bland_trigger) w.bland = true;
    } else {
      w.degenerate_streak = 0;
      w.bland = false;
    }
  }

  // -- extraction --------------------------------------------------------------
  sol.iterations = w.iterations;
  sol.x.assign(w.n, 0.0);
  std::vector<double> full(w.N, 0.0);
  for (int j = 0; j < w.N; ++j)
    if (w.stat[j] != kBasic) full[j] = w.nonbasic_value(j);
  for (int p = 0; p < w.m; ++p) full[w.basic[p]] = w.xB[p];
  for (int j = 0; j < w.n; ++j) sol.x[j] = full[j] * w.col_scale[j];

  sol.row_activity = lp.row_activity(sol.x);
  sol.objective = lp.objective_value(sol.x);
  sol.max_primal_residual = lp.feasibility_residual(sol.x);

  // duals from the terminal basis (phase-2 costs)
  w.cB.assign(w.m, 0.0);
  for (int p = 0; p < w.m; ++p) w.cB[p] = w.basic[p] < w.n ? w.cost[w.basic[p]] : 0.0;
  std::vector<double> yv2;
  w.btran_costs(w.cB, yv2);
  sol.dual.assign(w.m, 0.0);
  for (int r = 0; r < w.m; ++r) sol.dual[r] = yv2[r] * w.row_scale[r];
  sol.reduced_cost.assign(w.n, 0.0);
  for (int j = 0; j < w.n; ++j) {
    const double d = w.reduced_cost(j, yv2, true);
    sol.reduced_cost[j] = d / w.col_scale[j];
  }

  sol.basis.basic = w.basic;
  sol.basis.at_upper.assign(w.N, 0);
  for (int j = 0; j < w.N; ++j) sol.basis.at_upper[j] = w.stat[j] == kAtUpper ? 1 : 0;

  sol.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (options.verbose) {
    std::fprintf(stderr, "[simplex] %s obj=%.10g iters=%lld residual=%.2e %.2fs\n",
                 to_string(sol.status), sol.objective,
                 static_cast<long long>(sol.iterations), sol.max_primal_residual,
                 sol.solve_seconds);
  }
  return sol;
}

double LpSolution::dual_objective(const LinearProgram& lp) const {
  // y.rhs plus reduced-cost contributions of nonbasic variables at bounds;
  // logicals have cost 0 and reduced cost -y.
  double v = 0.0;
  for (int r = 0; r < lp.num_rows; ++r) v += dual[r] * lp.rhs[r];
  std::vector<char> is_basic(lp.num_cols + lp.num_rows, 0);
  for (int b : basis.basic) is_basic[b] = 1;
  for (int j = 0; j < lp.num_cols; ++j) {
    if (is_basic[j]) continue;
    v += reduced_cost[j] * x[j];
  }
  for (int r = 0; r < lp.num_rows; ++r) {
    const int j = lp.num_cols + r;
    if (is_basic[j]) continue;
    const double s = lp.rhs[r] - row_activity[r];
    v += -dual[r] * s;
  }
  return v;
}

} // namespace coldchain::lp
