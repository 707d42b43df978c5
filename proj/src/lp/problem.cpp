#include "coldchain/lp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coldchain::lp {

std::vector<double> LinearProgram::row_activity(const std::vector<double>& x) const {
  std::vector<double> act(num_rows, 0.0);
  for (int j = 0; j < num_cols; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (std::int64_t k = col_ptr[j]; k < col_ptr[j + 1]; ++k)
      act[row_index[k]] += value[k] * xj;
  }
  return act;
}

double LinearProgram::feasibility_residual(const std::vector<double>& x) const {
  const auto act = row_activity(x);
  double worst = 0.0;
  for (int r = 0; r < num_rows; ++r) {
    const double scale = 1.0 + std::fabs(rhs[r]);
    double v = 0.0;
    switch (sense[r]) {
      case RowSense::LE: v = act[r] - rhs[r]; break;
      case RowSense::GE: v = rhs[r] - act[r]; break;
      case RowSense::EQ: v = std::fabs(act[r] - rhs[r]); break;
    }
    worst = std::max(worst, v / scale);
  }
  for (int j = 0; j < num_cols; ++j) {
    const double scale = 1.0 + std::fabs(x[j]);
    if (col_lb[j] > -kInf) worst = std::max(worst, (col_lb[j] - x[j]) / scale);
    if (col_ub[j] < kInf) worst = std::max(worst, (x[j] - col_ub[j]) / scale);
  }
  return worst;
}

double LinearProgram::objective_value(const std::vector<double>& x) const {
  double v = 0.0;
  for (int j = 0; j < num_cols; ++j) v += objective[j] * x[j];
  return v;
}

int LpBuilder::add_column(double obj, double lb, double ub) {
  obj_.push_back(obj);
  lb_.push_back(lb);
  ub_.push_back(ub);
  return static_cast<int>(obj_.size()) - 1;
}

int LpBuilder::add_row(RowSense sense, double rhs, const std::vector<int>& cols,
                       const std::vector<double>& vals) {
  if (cols.size() != vals.size()) throw std::invalid_argument("row cols/vals size mismatch");
  if (row_start_.empty()) row_start_.push_back(0);
  // merge duplicate columns so downstream factorizations see unique entries
  std::vector<std::pair<int, double>> entries;
  entries.reserve(cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) entries.emplace_back(cols[k], vals[k]);
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 0; k < entries.size();) {
    int c = entries[k].first;
    double v = 0.0;
    while (k < entries.size() && entries[k].first == c) v += entries[k++].second;
    if (v == 0.0) continue;
    tri_col_.push_back(c);
    tri_val_.push_back(v);
  }
  row_start_.push_back(static_cast<std::int64_t>(tri_col_.size()));
  sense_.push_back(sense);
  rhs_.push_back(rhs);
  return static_cast<int>(rhs_.size()) - 1;
}

LinearProgram LpBuilder::build() const {
  LinearProgram lp;
  lp.num_cols = num_cols();
  lp.num_rows = num_rows();
  lp.objective = obj_;
  lp.col_lb = lb_;
  lp.col_ub = ub_;
  lp.sense = sense_;
  lp.rhs = rhs_;

  // triplets (row-grouped) -> CSC with row-sorted entries
  std::vector<std::int64_t> count(lp.num_cols + 1, 0);
  for (int c : tri_col_) ++count[c + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  lp.col_ptr = count;
  lp.row_index.resize(tri_col_.size());
  lp.value.resize(tri_col_.size());
  std::vector<std::int64_t> next(lp.col_ptr.begin(), lp.col_ptr.end() - 1);
  for (int r = 0; r < lp.num_rows; ++r) {
    for (std::int64_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      const int c = tri_col_[k];
      const std::int64_t pos = next[c]++;
      lp.row_index[pos] = r;
      lp.value[pos] = tri_val_[k];
    }
  }
  return lp;
}

} // namespace coldchain::lp
