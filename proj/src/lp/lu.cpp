#include "lu.hpp"

#include <algorithm>
#include <cmath>

namespace coldchain::lp {

std::vector<std::pair<int, int>> LuFactor::factorize(
    int m, const std::vector<std::int64_t>& col_start, const std::vector<int>& rows,
    const std::vector<double>& vals) {
  m_ = m;
  prow_.assign(m, -1);
  pcol_.assign(m, -1);
  udiag_.assign(m, 0.0);
  l_start_.assign(1, 0);
  l_row_.clear();
  l_val_.clear();
  u_start_.assign(1, 0);
  u_ord_.clear();
  u_val_.clear();

  // row -> pivot ordinal (or -1)
  std::vector<int> rowk(m, -1);

  // process columns by ascending nonzero count; ties by position
  std::vector<int> order(m);
  for (int p = 0; p < m; ++p) order[p] = p;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return (col_start[a + 1] - col_start[a]) < (col_start[b + 1] - col_start[b]);
  });

  std::vector<double> w(m, 0.0);
  std::vector<int> pattern;          // rows touched in w
  std::vector<int> stack, stack_k;   // DFS state
  std::vector<int> topo;             // pivot ordinals, topological
  std::vector<signed char> mark(m, 0);  // per row: 0 unseen, 1 in progress/seen
  std::vector<int> singular_positions;

  auto process_column = [&](int cpos, const int* crows, const double* cvals, int cn,
                            int& npiv) -> bool {
    pattern.clear();
    topo.clear();
    // symbolic: DFS through L columns of already-pivoted rows; reverse
    // postorder gives the topological elimination order
    for (int e = 0; e < cn; ++e) {
      int root = crows[e];
      if (mark[root]) continue;
      stack.clear();
      stack_k.clear();
      stack.push_back(root);
      stack_k.push_back(0);
      mark[root] = 1;
      while (!stack.empty()) {
        const int r = stack.back();
        const int k = rowk[r];
        bool descended = false;
        if (k >= 0) {
          int cursor = stack_k.back();
          const int len = static_cast<int>(l_start_[k + 1] - l_start_[k]);
          while (cursor < len) {
            const int child = l_row_[l_start_[k] + cursor];
            ++cursor;
            if (!mark[child]) {
              mark[child] = 1;
              stack_k.back() = cursor;
              stack.push_back(child);
              stack_k.push_back(0);
              descended = true;
              break;
            }
          }
          if (!descended) stack_k.back() = cursor;
        }
        if (!descended) {
          if (k >= 0) topo.push_back(k);
          pattern.push_back(r);
          stack.pop_back();
          stack_k.pop_back();
        }
      }
    }
    // numeric: scatter, then eliminate in topological order (reverse postorder)
    for (int e = 0; e < cn; ++e) w[crows[e]] += cvals[e];
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
      const int k = *it;
      const double a = w[prow_[k]];
      if (a != 0.0) {
        for (std::int64_t q = l_start_[k]; q < l_start_[k + 1]; ++q)
          w[l_row_[q]] -= a * l_val_[q];
      }
    }
    // pivot: largest magnitude among unpivoted rows, ties lowest row
    int prow = -1;
    double pmax = 0.0;
    for (int r : pattern) {
      if (rowk[r] >= 0) continue;
      const double a = std::fabs(w[r]);
      if (a > pmax || (a == pmax && a > 0.0 && r < prow)) {
        pmax = a;
        prow = r;
      }
    }
    const bool ok = prow >= 0 && pmax > 1e-11;
    if (ok) {
      const int k = npiv++;
      prow_[k] = prow;
      pcol_[k] = cpos;
      udiag_[k] = w[prow];
      for (int r : pattern) {
        const double v = w[r];
        if (v == 0.0 || r == prow) continue;
        const int rk = rowk[r];
        if (rk >= 0) {
          u_ord_.push_back(rk);
          u_val_.push_back(v);
        } else {
          l_row_.push_back(r);
          l_val_.push_back(v / udiag_[k]);
        }
      }
      u_start_.push_back(static_cast<std::int64_t>(u_ord_.size()));
      l_start_.push_back(static_cast<std::int64_t>(l_row_.size()));
      rowk[prow] = k;
    }
    for (int r : pattern) {
      w[r] = 0.0;
      mark[r] = 0;
    }
    return ok;
  };

  int npiv = 0;
  for (int p = 0; p < m; ++p) {
    const int cpos = order[p];
    const int cn = static_cast<int>(col_start[cpos + 1] - col_start[cpos]);
    if (!process_column(cpos, rows.data() + col_start[cpos], vals.data() + col_start[cpos],
                        cn, npiv)) {
      singular_positions.push_back(cpos);
    }
  }

  // replace singular columns with unit columns of leftover rows
  std::vector<std::pair<int, int>> repairs;
  if (!singular_positions.empty()) {
    std::vector<int> leftover;
    for (int r = 0; r < m; ++r)
      if (rowk[r] < 0) leftover.push_back(r);
    std::size_t li = 0;
    for (int cpos : singular_positions) {
      const int r = leftover[li++];
      const double one = 1.0;
      const bool ok = process_column(cpos, &r, &one, 1, npiv);
      (void)ok;  // a unit column of an unpivoted row always pivots at that row
      repairs.emplace_back(cpos, r);
    }
  }
  return repairs;
}

void LuFactor::ftran(std::vector<double>& w, std::vector<double>& result_by_pos) const {
  for (int k = 0; k < m_; ++k) {
    const double a = w[prow_[k]];
    if (a != 0.0) {
      for (std::int64_t q = l_start_[k]; q < l_start_[k + 1]; ++q)
        w[l_row_[q]] -= a * l_val_[q];
    }
  }
  result_by_pos.assign(m_, 0.0);
  for (int k = m_ - 1; k >= 0; --k) {
    const double t = w[prow_[k]] / udiag_[k];
    if (t != 0.0) {
      for (std::int64_t q = u_start_[k]; q < u_start_[k + 1]; ++q)
        w[prow_[u_ord_[q]]] -= t * u_val_[q];
    }
    result_by_pos[pcol_[k]] = t;
  }
}

void LuFactor::btran(const std::vector<double>& c_by_pos, std::vector<double>& y_by_row) const {
  std::vector<double> z(m_, 0.0);
  for (int k = 0; k < m_; ++k) {
    double acc = c_by_pos[pcol_[k]];
    for (std::int64_t q = u_start_[k]; q < u_start_[k + 1]; ++q)
      acc -= u_val_[q] * z[u_ord_[q]];
    z[k] = acc / udiag_[k];
  }
  y_by_row.assign(m_, 0.0);
  for (int k = m_ - 1; k >= 0; --k) {
    double acc = z[k];
    for (std::int64_t q = l_start_[k]; q < l_start_[k + 1]; ++q)
      acc -= l_val_[q] * y_by_row[l_row_[q]];
    y_by_row[prow_[k]] = acc;
  }
}

} // namespace coldchain::lp
