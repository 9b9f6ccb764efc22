#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "grothcat/scalar.hpp"

namespace grothcat {

/// Sparse vector over column indices; zero entries are never stored.
using SparseVector = std::map<std::size_t, Scalar>;

inline void axpy(SparseVector& y, const Scalar& a, const SparseVector& x) {
  for (const auto& [col, v] : x) {
    auto [it, inserted] = y.try_emplace(col, a * v);
    if (!inserted) {
      it->second += a * v;
      if (it->second.is_zero()) y.erase(it);
    }
  }
}

/// Incremental reduced row echelon form.
///
/// The pivot of a row is its LARGEST column, so when columns are paths sorted
/// by the global path order, reduce() rewrites long paths in terms of shorter
/// ones. Pivot coefficients are normalized to one and every stored row is
/// free of the other rows' pivots.
class RowEchelon {
 public:
  /// Inserts v into the row space. Returns false if v was already dependent.
  bool insert(SparseVector v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    std::size_t pivot = v.rbegin()->first;
    Scalar lead = v.rbegin()->second;
    for (auto& [col, value] : v) value /= lead;
    for (auto& [p, row] : rows_) {
      auto it = row.find(pivot);
      if (it != row.end()) {
        Scalar factor = -it->second;
        axpy(row, factor, v);
      }
    }
    rows_.emplace(pivot, std::move(v));
    return true;
  }

  /// Remainder of v modulo the row space; contains no pivot columns.
  SparseVector reduce(SparseVector v) const {
    // Pivot rows only touch columns <= their pivot, so a descending sweep
    // never revisits a column.
    auto it = v.rbegin();
    while (it != v.rend()) {
      std::size_t col = it->first;
      auto row = rows_.find(col);
      if (row == rows_.end()) {
        ++it;
        continue;
      }
      Scalar factor = -it->second;
      axpy(v, factor, row->second);
      it = std::make_reverse_iterator(v.lower_bound(col));
    }
    return v;
  }

  bool is_pivot(std::size_t col) const { return rows_.contains(col); }
  std::size_t rank() const { return rows_.size(); }

  /// Rows keyed by pivot column.
  const std::map<std::size_t, SparseVector>& rows() const { return rows_; }

 private:
  std::map<std::size_t, SparseVector> rows_;
};

/// Rank of a family of vectors.
inline std::size_t rank_of(const std::vector<SparseVector>& vectors) {
  RowEchelon e;
  for (const auto& v : vectors) e.insert(v);
  return e.rank();
}

}  // namespace grothcat
