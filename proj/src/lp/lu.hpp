#pragma once

#include <cstdint>
#include <vector>

namespace coldchain::lp {

/// Sparse LU factorization of a simplex basis, left-looking (Gilbert-Peierls)
/// with partial pivoting. Columns are processed in ascending-nnz order, which
/// peels singleton and near-triangular structure without fill.
///
/// The factorization satisfies, per pivot k with row prow[k] and basis
/// position pcol[k]:
///   B[:, pcol[k]] = Udiag[k] * Lfull_k + sum_{(j,v) in Ucol[k]} v * Lfull_j
/// where Lfull_k = e_{prow[k]} + sum_{(r,v) in Lcol[k]} v * e_r.
class LuFactor {
 public:
  /// Factorizes the m x m matrix given as m sparse columns. Columns that turn
  /// out singular are replaced by unit columns of leftover rows; the affected
  /// (basis position, replacement row) pairs are returned so the caller can
  /// repair its basis bookkeeping.
  std::vector<std::pair<int, int>> factorize(int m,
                                             const std::vector<std::int64_t>& col_start,
                                             const std::vector<int>& rows,
                                             const std::vector<double>& vals);

  int dim() const { return m_; }
  std::int64_t nnz() const {
    return static_cast<std::int64_t>(l_row_.size() + u_ord_.size()) + m_;
  }

  /// Solves B x = b. Input w is indexed by row; the result is indexed by
  /// basis position.
  void ftran(std::vector<double>& w, std::vector<double>& result_by_pos) const;

  /// Solves B^T y = c. Input c is indexed by basis position; the result y is
  /// indexed by row.
  void btran(const std::vector<double>& c_by_pos, std::vector<double>& y_by_row) const;

 private:
  int m_ = 0;
  std::vector<int> prow_, pcol_;       // pivot order -> row / basis position
  std::vector<double> udiag_;
  // L columns (rows pivoted later), flattened
  std::vector<std::int64_t> l_start_;
  std::vector<int> l_row_;
  std::vector<double> l_val_;
  // U columns (references to earlier pivot ordinals), flattened
  std::vector<std::int64_t> u_start_;
  std::vector<int> u_ord_;
  std::vector<double> u_val_;
};

} // namespace coldchain::lp
