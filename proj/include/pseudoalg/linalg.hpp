#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pseudoalg/rational.hpp"

namespace pseudoalg {

inline RatMat zero_mat(int rows, int cols) {
  return RatMat(static_cast<size_t>(rows), zero_vec(cols));
}

inline RatMat identity_mat(int n) {
  RatMat m = zero_mat(n, n);
  for (int i = 0; i < n; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  return m;
}

inline RatMat mat_mul(const RatMat& a, const RatMat& b) {
  size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  RatMat c(n, RatVec(m, Rat(0)));
  for (size_t i = 0; i < n; ++i) {
    if (a[i].size() != k) throw std::invalid_argument("mat_mul shape");
    for (size_t p = 0; p < k; ++p) {
      if (is_zero(a[i][p])) continue;
      for (size_t j = 0; j < m; ++j) c[i][j] += a[i][p] * b[p][j];
    }
  }
  return c;
}

inline RatMat mat_add(const RatMat& a, const RatMat& b) {
  RatMat c = a;
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 0; j < c[i].size(); ++j) c[i][j] += b[i][j];
  return c;
}

inline RatMat mat_sub(const RatMat& a, const RatMat& b) {
  RatMat c = a;
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 0; j < c[i].size(); ++j) c[i][j] -= b[i][j];
  return c;
}

inline RatMat mat_scale(const Rat& s, const RatMat& a) {
  RatMat c = a;
  for (auto& row : c)
    for (auto& x : row) x *= s;
  return c;
}

inline RatMat mat_transpose(const RatMat& a) {
  if (a.empty()) return a;
  RatMat t(a[0].size(), RatVec(a.size(), Rat(0)));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline RatVec mat_apply(const RatMat& a, const RatVec& v) {
  RatVec out(a.size(), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != v.size()) throw std::invalid_argument("mat_apply shape");
    for (size_t j = 0; j < v.size(); ++j)
      if (!is_zero(a[i][j])) out[i] += a[i][j] * v[j];
  }
  return out;
}

inline bool mat_is_zero(const RatMat& a) {
  for (const auto& row : a)
    if (!vec_is_zero(row)) return false;
  return true;
}

/// Gauss-Jordan inverse; throws on a singular input.
inline RatMat mat_inverse(const RatMat& a) {
  size_t n = a.size();
  RatMat m = a;
  RatMat inv = identity_mat(static_cast<int>(n));
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && is_zero(m[piv][col])) ++piv;
    if (piv == n) throw std::domain_error("singular matrix");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    Rat d = m[col][col];
    for (size_t j = 0; j < n; ++j) {
      m[col][j] /= d;
      inv[col][j] /= d;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col || is_zero(m[r][col])) continue;
      Rat f = m[r][col];
      for (size_t j = 0; j < n; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

/// Row-echelon accumulator over sparse rational rows. Rows are reduced
/// against the pivots already stored, so the pivot set stays small even when
/// millions of redundant constraint rows are fed in.
class Echelon {
 public:
  explicit Echelon(int ncols) : ncols_(ncols) {}

  using SparseRow = std::map<int, Rat>;

  /// Reduces `row` and absorbs the remainder as a new pivot when nonzero.
  /// Returns true when the row was independent.
  bool add_row(SparseRow row) {
    reduce(row);
    if (row.empty()) return false;
    int lead = row.begin()->first;
    Rat d = row.begin()->second;
    for (auto& [c, v] : row) v /= d;
    // keep existing pivots reduced against the new one
    for (auto& [plead, prow] : pivots_) {
      auto it = prow.find(lead);
      if (it == prow.end()) continue;
      Rat f = it->second;
      axpy(prow, -f, row);
    }
    pivots_[lead] = std::move(row);
    return true;
  }

  void reduce(SparseRow& row) const {
    // cancel the leading entry while its column is a pivot column
    while (!row.empty()) {
      auto p = pivots_.find(row.begin()->first);
      if (p == pivots_.end()) break;
      Rat f = row.begin()->second;
      axpy(row, -f, p->second);
    }
    if (row.empty()) return;
    // cancel interior pivot-column entries; pivot rows only touch columns
    // at or after their lead, so the row's own lead never moves
    auto it = std::next(row.begin());
    while (it != row.end()) {
      auto p = pivots_.find(it->first);
      if (p == pivots_.end()) {
        ++it;
        continue;
      }
      int col = it->first;
      Rat f = it->second;
      axpy(row, -f, p->second);
      it = row.upper_bound(col);
    }
  }

  int rank() const { return static_cast<int>(pivots_.size()); }
  int ncols() const { return ncols_; }
  const std::map<int, SparseRow>& pivots() const { return pivots_; }

  /// Basis of the solution space of (rows)·x = 0 over all ncols unknowns.
  std::vector<RatVec> nullspace_basis() const {
    std::vector<RatVec> basis;
    std::vector<bool> is_pivot(static_cast<size_t>(ncols_), false);
    for (const auto& [lead, row] : pivots_) is_pivot[static_cast<size_t>(lead)] = true;
    for (int free = 0; free < ncols_; ++free) {
      if (is_pivot[static_cast<size_t>(free)]) continue;
      RatVec v = zero_vec(ncols_);
      v[static_cast<size_t>(free)] = 1;
      for (const auto& [lead, row] : pivots_) {
        auto it = row.find(free);
        if (it != row.end()) v[static_cast<size_t>(lead)] = -it->second;
      }
      basis.push_back(std::move(v));
    }
    return basis;
  }

  static void axpy(SparseRow& dst, const Rat& a, const SparseRow& src) {
    for (const auto& [c, v] : src) {
      auto [it, inserted] = dst.try_emplace(c, a * v);
      if (!inserted) {
        it->second += a * v;
        if (is_zero(it->second)) dst.erase(it);
      } else if (is_zero(it->second)) {
        dst.erase(it);
      }
    }
  }

 private:
  int ncols_;
  std::map<int, SparseRow> pivots_;  // lead column -> normalized row
};

/// Solves A x = b exactly; returns nullopt when inconsistent.
inline std::optional<RatVec> solve_linear(const RatMat& a, const RatVec& b) {
  size_t rows = a.size();
  size_t cols = rows ? a[0].size() : 0;
  Echelon ech(static_cast<int>(cols) + 1);
  for (size_t i = 0; i < rows; ++i) {
    Echelon::SparseRow r;
    for (size_t j = 0; j < cols; ++j)
      if (!is_zero(a[i][j])) r[static_cast<int>(j)] = a[i][j];
    if (!is_zero(b[i])) r[static_cast<int>(cols)] = -b[i];
    ech.add_row(std::move(r));
  }
  // inconsistent iff a pivot sits on the augmented column
  if (ech.pivots().count(static_cast<int>(cols))) return std::nullopt;
  RatVec x = zero_vec(static_cast<int>(cols));
  for (const auto& [lead, row] : ech.pivots()) {
    auto it = row.find(static_cast<int>(cols));
    if (it != row.end()) x[static_cast<size_t>(lead)] = -it->second;
  }
  return x;
}

inline int mat_rank(const RatMat& a) {
  if (a.empty()) return 0;
  Echelon ech(static_cast<int>(a[0].size()));
  for (const auto& row : a) {
    Echelon::SparseRow r;
    for (size_t j = 0; j < row.size(); ++j)
      if (!is_zero(row[j])) r[static_cast<int>(j)] = row[j];
    ech.add_row(std::move(r));
  }
  return ech.rank();
}

}  // namespace pseudoalg
