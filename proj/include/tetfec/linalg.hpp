#ifndef TETFEC_LINALG_HPP
#define TETFEC_LINALG_HPP

/// Exact rational matrices with rank / reduced row echelon / nullspace /
/// solve, plus a non-authoritative floating-point rank for quick runs.
///
/// The authoritative rank path clears denominators row-wise and eliminates on
/// sparse integer rows, dividing every updated row by its content so no
/// fractions ever appear and entries stay near minor size.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tetfec/parallel.hpp"
#include "tetfec/rat.hpp"

namespace tetfec {

struct RatMatrix {
  int rows = 0, cols = 0;
  std::vector<Rat> a;  // row-major

  RatMatrix() = default;
  RatMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, Rat(0)) {}

  Rat& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Rat& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static RatMatrix identity(int n) {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool is_zero() const {
    for (const auto& e : a)
      if (e != 0) return false;
    return true;
  }

  bool operator==(const RatMatrix&) const = default;

  RatMatrix transposed() const {
    RatMatrix t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  RatMatrix operator*(const RatMatrix& o) const {
    if (cols != o.rows) throw std::invalid_argument("matmul: shape mismatch");
    RatMatrix r(rows, o.cols);
    parallel_for(static_cast<std::size_t>(rows), [&](std::size_t iz) {
      int i = static_cast<int>(iz);
      for (int k = 0; k < cols; ++k) {
        const Rat& v = at(i, k);
        if (v == 0) continue;
        for (int j = 0; j < o.cols; ++j) {
          const Rat& w = o.at(k, j);
          if (w != 0) r.at(i, j) += v * w;
        }
      }
    });
    return r;
  }

  RatMatrix operator-(const RatMatrix& o) const {
    if (rows != o.rows || cols != o.cols) throw std::invalid_argument("sub: shape mismatch");
    RatMatrix r(rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] - o.a[i];
    return r;
  }

  /// Horizontal concatenation [this | o].
  RatMatrix hcat(const RatMatrix& o) const {
    if (rows != o.rows) throw std::invalid_argument("hcat: row mismatch");
    RatMatrix r(rows, cols + o.cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) r.at(i, j) = at(i, j);
      for (int j = 0; j < o.cols; ++j) r.at(i, cols + j) = o.at(i, j);
    }
    return r;
  }

  /// Vertical concatenation [this; o].
  RatMatrix vcat(const RatMatrix& o) const {
    if (cols != o.cols) throw std::invalid_argument("vcat: col mismatch");
    RatMatrix r(rows + o.rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) r.at(i, j) = at(i, j);
    for (int i = 0; i < o.rows; ++i)
      for (int j = 0; j < cols; ++j) r.at(rows + i, j) = o.at(i, j);
    return r;
  }

  RatMatrix col_slice(const std::vector<int>& idx) const {
    RatMatrix r(rows, static_cast<int>(idx.size()));
    for (int i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) r.at(i, static_cast<int>(j)) = at(i, idx[j]);
    return r;
  }
};

namespace detail {

/// Cheap complexity measure used only for pivot preference.
inline std::size_t rat_bits(const Rat& r) {
  return msb(abs(numerator(r)) + 1) + msb(denominator(r) + 1);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Reduced row echelon form over Q (dense; for small/medium systems).

/// In-place RREF. Returns the list of pivot columns; rank = pivots.size().
inline std::vector<int> rref_inplace(RatMatrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int best = -1;
    std::size_t best_bits = 0;
    for (int i = row; i < m.rows; ++i) {
      if (m.at(i, col) == 0) continue;
      std::size_t b = detail::rat_bits(m.at(i, col));
      if (best < 0 || b < best_bits) {
        best = i;
        best_bits = b;
      }
    }
    if (best < 0) continue;
    if (best != row)
      for (int j = col; j < m.cols; ++j) std::swap(m.at(best, j), m.at(row, j));
    Rat inv = Rat(1) / m.at(row, col);
    for (int j = col; j < m.cols; ++j)
      if (m.at(row, j) != 0) m.at(row, j) *= inv;
    parallel_for(static_cast<std::size_t>(m.rows), [&](std::size_t iz) {
      int i = static_cast<int>(iz);
      if (i == row || m.at(i, col) == 0) return;
      Rat f = m.at(i, col);
      for (int j = col; j < m.cols; ++j) {
        const Rat& p = m.at(row, j);
        if (p != 0) m.at(i, j) -= f * p;
      }
    });
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Columns spanning ker(A); empty-column matrix when the kernel is trivial.
inline RatMatrix nullspace(RatMatrix A) {
  std::vector<int> pivots = rref_inplace(A);
  std::vector<bool> is_pivot(A.cols, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (int j = 0; j < A.cols; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  RatMatrix basis(A.cols, static_cast<int>(free_cols.size()));
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    int fc = free_cols[k];
    basis.at(fc, static_cast<int>(k)) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      basis.at(pivots[r], static_cast<int>(k)) = -A.at(static_cast<int>(r), fc);
  }
  return basis;
}

/// Solve A X = B for square nonsingular A; nullopt if A is singular.
inline std::optional<RatMatrix> solve(const RatMatrix& A, const RatMatrix& B) {
  if (A.rows != A.cols || A.rows != B.rows) throw std::invalid_argument("solve: shape mismatch");
  RatMatrix aug = A.hcat(B);
  std::vector<int> pivots = rref_inplace(aug);
  // A is nonsingular iff every column of the A-block is a pivot column.
  int lead = 0;
  for (int p : pivots) lead += (p < A.cols) ? 1 : 0;
  if (lead != A.cols) return std::nullopt;
  RatMatrix x(A.cols, B.cols);
  for (int i = 0; i < A.cols; ++i)
    for (int j = 0; j < B.cols; ++j) x.at(i, j) = aug.at(i, A.cols + j);
  return x;
}

inline std::optional<RatMatrix> inverse(const RatMatrix& A) {
  return solve(A, RatMatrix::identity(A.rows));
}

/// Determinant by rational Gaussian elimination with row swaps.
inline Rat det(RatMatrix m) {
  if (m.rows != m.cols) throw std::invalid_argument("det: square matrix required");
  Rat result(1);
  for (int c = 0; c < m.cols; ++c) {
    int piv = -1;
    for (int r = c; r < m.rows; ++r)
      if (m.at(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return Rat(0);
    if (piv != c) {
      for (int j = c; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(c, j));
      result = -result;
    }
    result *= m.at(c, c);
    for (int r = c + 1; r < m.rows; ++r) {
      if (m.at(r, c) == 0) continue;
      Rat f = m.at(r, c) / m.at(c, c);
      for (int j = c; j < m.cols; ++j) m.at(r, j) -= f * m.at(c, j);
    }
  }
  return result;
}

/// Indices of columns of A that extend span(B) to span([B A]),
/// i.e. a complement of span(B) inside span([B A]) chosen among A's columns.
inline std::vector<int> complement_columns(const RatMatrix& B, const RatMatrix& A) {
  RatMatrix stacked = B.hcat(A);
  std::vector<int> pivots = rref_inplace(stacked);
  std::vector<int> chosen;
  for (int p : pivots)
    if (p >= B.cols) chosen.push_back(p - B.cols);
  return chosen;
}

// ---------------------------------------------------------------------------
// Sparse exact rank (authoritative path for large matrices).

/// Sparse rational matrix assembled from triplets; used where materializing a
/// dense operator matrix would waste memory.
struct SparseRatMatrix {
  int rows = 0, cols = 0;
  std::vector<std::vector<std::pair<int, Rat>>> row;  // each sorted by column

  SparseRatMatrix() = default;
  SparseRatMatrix(int r, int c) : rows(r), cols(c), row(static_cast<std::size_t>(r)) {}

  void add(int i, int j, const Rat& v) {
    if (v == 0) return;
    auto& r = row[static_cast<std::size_t>(i)];
    auto it = std::lower_bound(r.begin(), r.end(), j,
                               [](const auto& e, int c) { return e.first < c; });
    if (it != r.end() && it->first == j) {
      it->second += v;
      if (it->second == 0) r.erase(it);
    } else {
      r.insert(it, {j, v});
    }
  }

  static SparseRatMatrix from_dense(const RatMatrix& A) {
    SparseRatMatrix s(A.rows, A.cols);
    for (int i = 0; i < A.rows; ++i)
      for (int j = 0; j < A.cols; ++j)
        if (A.at(i, j) != 0) s.row[static_cast<std::size_t>(i)].emplace_back(j, A.at(i, j));
    return s;
  }
};

/// Exact rank by integer elimination with sparsity-guided pivoting. Each row is
/// scaled to integers and divided by its content after every update; row
/// scaling never changes rank, and all arithmetic stays in Z.
inline long rank_exact(const SparseRatMatrix& A, unsigned jobs = 0) {
  struct IRow {
    std::vector<std::pair<int, Int>> e;
  };
  const int n = A.rows;
  std::vector<IRow> rows(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    Int scale = 1;
    for (const auto& [c, v] : A.row[i]) scale = lcm(scale, denominator(v));
    Int content = 0;
    auto& ents = rows[i].e;
    ents.reserve(A.row[i].size());
    for (const auto& [c, v] : A.row[i]) {
      Int w = numerator(v) * (scale / denominator(v));
      content = gcd(content, w);
      ents.emplace_back(c, std::move(w));
    }
    if (content > 1)
      for (auto& [c, w] : ents) w /= content;
  }, jobs);

  std::vector<char> active(static_cast<std::size_t>(n), 1);
  std::vector<int> col_count(static_cast<std::size_t>(A.cols), 0);
  for (const auto& r : rows)
    for (const auto& [c, v] : r.e) ++col_count[static_cast<std::size_t>(c)];

  long rank = 0;
  std::vector<int> victims;
  for (;;) {
    int prow = -1;
    std::size_t pnnz = 0;
    for (int i = 0; i < n; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      if (rows[static_cast<std::size_t>(i)].e.empty()) {
        active[static_cast<std::size_t>(i)] = 0;
        continue;
      }
      std::size_t nn = rows[static_cast<std::size_t>(i)].e.size();
      if (prow < 0 || nn < pnnz) {
        prow = i;
        pnnz = nn;
      }
    }
    if (prow < 0) break;

    int pcol = -1;
    long best_cc = 0;
    std::size_t best_bits = 0;
    for (const auto& [c, v] : rows[static_cast<std::size_t>(prow)].e) {
      long cc = col_count[static_cast<std::size_t>(c)];
      std::size_t b = msb(abs(v) + 1);
      if (pcol < 0 || cc < best_cc || (cc == best_cc && b < best_bits)) {
        pcol = c;
        best_cc = cc;
        best_bits = b;
      }
    }
    const IRow pivot_row = rows[static_cast<std::size_t>(prow)];
    Int pval = 0;
    for (const auto& [c, v] : pivot_row.e)
      if (c == pcol) pval = v;

    victims.clear();
    for (int i = 0; i < n; ++i) {
      if (!active[static_cast<std::size_t>(i)] || i == prow) continue;
      for (const auto& [c, v] : rows[static_cast<std::size_t>(i)].e)
        if (c == pcol) {
          victims.push_back(i);
          break;
        }
    }

    std::vector<std::vector<int>> delta_add(victims.size());
    parallel_for(victims.size(), [&](std::size_t t) {
      int i = victims[t];
      IRow& tr = rows[static_cast<std::size_t>(i)];
      Int f = 0;
      for (const auto& [c, v] : tr.e)
        if (c == pcol) f = v;
      IRow out;
      out.e.reserve(tr.e.size() + pivot_row.e.size());
      std::size_t ii = 0, jj = 0;
      Int content = 0;
      while (ii < tr.e.size() || jj < pivot_row.e.size()) {
        int ci = ii < tr.e.size() ? tr.e[ii].first : INT32_MAX;
        int cj = jj < pivot_row.e.size() ? pivot_row.e[jj].first : INT32_MAX;
        int c = std::min(ci, cj);
        Int v = 0;
        if (ci == c) v = pval * tr.e[ii++].second;
        if (cj == c) v -= f * pivot_row.e[jj++].second;
        if (c == pcol || v == 0) continue;
        content = gcd(content, v);
        out.e.emplace_back(c, std::move(v));
      }
      if (content > 1)
        for (auto& [c, v] : out.e) v /= content;
      // Record nnz pattern change for the column counters.
      auto& added = delta_add[t];
      for (const auto& ent : tr.e) added.push_back(-ent.first - 1);
      for (const auto& ent : out.e) added.push_back(ent.first + 1);
      tr = std::move(out);
    }, jobs);

    for (const auto& ds : delta_add)
      for (int d : ds) {
        if (d < 0)
          --col_count[static_cast<std::size_t>(-d - 1)];
        else
          ++col_count[static_cast<std::size_t>(d - 1)];
      }
    for (const auto& ent : pivot_row.e) --col_count[static_cast<std::size_t>(ent.first)];
    active[static_cast<std::size_t>(prow)] = 0;
    ++rank;
  }
  return rank;
}

inline long rank_exact(const RatMatrix& A, unsigned jobs = 0) {
  return rank_exact(SparseRatMatrix::from_dense(A), jobs);
}

// ---------------------------------------------------------------------------
// Floating-point rank (non-authoritative quick mode).

inline long rank_float(const RatMatrix& A, double tol = 1e-9) {
  const int n = A.rows, m = A.cols;
  if (n == 0 || m == 0) return 0;
  std::vector<double> w(static_cast<std::size_t>(n) * m);
  auto at = [&](int i, int j) -> double& { return w[static_cast<std::size_t>(i) * m + j]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) at(i, j) = A.at(i, j).convert_to<double>();
  // Two-sided equilibration: DoF matrices mix functionals of wildly
  // different scale, so a single global threshold is meaningless.
  for (int i = 0; i < n; ++i) {
    double s = 0;
    for (int j = 0; j < m; ++j) s = std::max(s, std::fabs(at(i, j)));
    if (s > 0)
      for (int j = 0; j < m; ++j) at(i, j) /= s;
  }
  for (int j = 0; j < m; ++j) {
    double s = 0;
    for (int i = 0; i < n; ++i) s = std::max(s, std::fabs(at(i, j)));
    if (s > 0)
      for (int i = 0; i < n; ++i) at(i, j) /= s;
  }
  // Gaussian elimination with complete pivoting; stop when the remaining
  // submatrix is negligible relative to the equilibrated unit scale.
  long rank = 0;
  int r = 0, c = 0;
  while (r < n && c < m) {
    int bi = r, bj = c;
    double best = 0;
    for (int i = r; i < n; ++i)
      for (int j = c; j < m; ++j)
        if (std::fabs(at(i, j)) > best) {
          best = std::fabs(at(i, j));
          bi = i;
          bj = j;
        }
    if (best <= tol) break;
    if (bi != r)
      for (int j = 0; j < m; ++j) std::swap(at(bi, j), at(r, j));
    if (bj != c)
      for (int i = 0; i < n; ++i) std::swap(at(i, bj), at(i, c));
    for (int i = r + 1; i < n; ++i) {
      double f = at(i, c) / at(r, c);
      if (f == 0) continue;
      at(i, c) = 0;
      for (int j = c + 1; j < m; ++j) at(i, j) -= f * at(r, j);
    }
    ++rank;
    ++r;
    ++c;
  }
  return rank;
}

}  // namespace tetfec

#endif
