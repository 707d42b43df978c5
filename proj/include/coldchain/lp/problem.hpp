#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace coldchain::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense : char { LE = 'L', EQ = 'E', GE = 'G' };

/// Sparse linear program, column-major. Objective sense is maximization.
/// Rows are  a_r . x  (sense)  rhs_r;  columns carry [lb, ub] bounds.
struct LinearProgram {
  int num_rows = 0;
  int num_cols = 0;

  // CSC storage; entries within a column are sorted by row.
  std::vector<std::int64_t> col_ptr;  // size num_cols + 1
  std::vector<int> row_index;
  std::vector<double> value;

  std::vector<double> objective;      // per column, maximize
  std::vector<double> col_lb, col_ub;
  std::vector<RowSense> sense;
  std::vector<double> rhs;

  std::int64_t nonzeros() const { return static_cast<std::int64_t>(value.size()); }

  /// Row activities A*x for a full primal vector.
  std::vector<double> row_activity(const std::vector<double>& x) const;

  /// Max scaled violation over row senses and column bounds.
  double feasibility_residual(const std::vector<double>& x) const;

  double objective_value(const std::vector<double>& x) const;
};

/// Incremental builder: define columns first, then append rows as sparse
/// combinations. Produces sorted CSC deterministically.
class LpBuilder {
 public:
  int add_column(double obj, double lb, double ub);
  void set_objective(int col, double obj) { obj_[col] = obj; }

  /// cols/vals must be unique column ids; duplicates within one row are summed.
  int add_row(RowSense sense, double rhs,
              const std::vector<int>& cols, const std::vector<double>& vals);

  int num_cols() const { return static_cast<int>(obj_.size()); }
  int num_rows() const { return static_cast<int>(rhs_.size()); }

  LinearProgram build() const;

 private:
  std::vector<double> obj_, lb_, ub_;
  std::vector<RowSense> sense_;
  std::vector<double> rhs_;
  // triplets, row-grouped
  std::vector<std::int64_t> row_start_;
  std::vector<int> tri_col_;
  std::vector<double> tri_val_;
};

} // namespace coldchain::lp
