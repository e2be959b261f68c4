#include "parikh/linalg.hpp"

#include <algorithm>
#include <limits>

#include "parikh/errors.hpp"

namespace parikh {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  for (const auto& r : rows) {
    if (r.size() != cols_) throw PreconditionError("ragged matrix literal");
    for (long long x : r) data_.emplace_back(x);
  }
}

IntMatrix IntMatrix::from_columns(std::span<const TermVector> columns, std::size_t dim) {
  IntMatrix m(dim, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (std::size_t r = 0; r < dim; ++r) m.at(r, c) = columns[c][r];
  }
  return m;
}

BigInt IntMatrix::max_abs_entry() const {
  BigInt best = 0;
  for (const auto& x : data_) best = std::max(best, BigInt(abs(x)));
  return best;
}

namespace {

// In-place fraction-free elimination. Returns the rank; when the matrix is
// square and full rank, *det receives the determinant.
std::size_t bareiss(IntMatrix& a, BigInt* det) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  BigInt prev = 1;
  int sign = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && a.at(pivot, c) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != r) {
      for (std::size_t k = 0; k < cols; ++k) std::swap(a.at(pivot, k), a.at(r, k));
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        a.at(i, k) = (a.at(r, c) * a.at(i, k) - a.at(i, c) * a.at(r, k)) / prev;
      }
      a.at(i, c) = 0;
    }
    prev = a.at(r, c);
    ++r;
  }
  if (det) *det = (rows == cols && r == rows) ? BigInt(sign * prev) : BigInt(0);
  return r;
}

std::vector<Rational> kernel_vector(std::span<const TermVector> cols, std::size_t dim) {
  const std::size_t s = cols.size();
  std::vector<std::vector<Rational>> m(dim, std::vector<Rational>(s));
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < s; ++c) m[r][c] = Rational(cols[c][r]);
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < s && row < dim; ++c) {
    std::size_t p = row;
    while (p < dim && m[p][c] == 0) ++p;
    if (p == dim) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i == row || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t k = 0; k < s; ++k) m[i][k] -= f * m[row][k];
    }
    pivot_col.push_back(c);
    ++row;
  }
  std::size_t free_col = s;
  for (std::size_t c = 0; c < s; ++c) {
    if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end()) {
      free_col = c;
      break;
    }
  }
  std::vector<Rational> beta(s, Rational(0));
  if (free_col == s) return beta;
  beta[free_col] = 1;
  for (std::size_t i = 0; i < pivot_col.size(); ++i) beta[pivot_col[i]] = -m[i][free_col];
  return beta;
}

}  // namespace

BigInt determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw PreconditionError("determinant of a non-square matrix");
  if (m.rows() == 0) return 1;
  IntMatrix a = m;
  BigInt det;
  bareiss(a, &det);
  return det;
}

BigInt hadamard_bound(std::size_t n, const BigInt& entry_bound) {
  BigInt result = 1;
  for (std::size_t k = 2; k <= n; ++k) result *= k;
  for (std::size_t k = 0; k < n; ++k) result *= entry_bound;
  return result;
}

std::optional<std::vector<Rational>> cramer_solve(const IntMatrix& m, std::span<const BigInt> b) {
  if (m.rows() != m.cols() || b.size() != m.rows()) throw PreconditionError("cramer_solve: dimension mismatch");
  const BigInt det = determinant(m);
  if (det == 0) return std::nullopt;
  std::vector<Rational> x;
  x.reserve(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    IntMatrix mc = m;
    for (std::size_t r = 0; r < m.rows(); ++r) mc.at(r, c) = b[r];
    const BigInt num = determinant(mc);
    x.emplace_back(det < 0 ? BigInt(-num) : num, abs(det));
  }
  return x;
}

std::size_t rank(std::span<const TermVector> vectors) {
  if (vectors.empty()) return 0;
  IntMatrix a = IntMatrix::from_columns(vectors, vectors[0].dim());
  return bareiss(a, nullptr);
}

bool is_linearly_independent(std::span<const TermVector> vectors) { return rank(vectors) == vectors.size(); }

std::optional<std::vector<BigInt>> nonneg_integer_solve(std::span<const TermVector> periods, const TermVector& v) {
  if (!is_linearly_independent(periods)) throw PreconditionError("nonneg_integer_solve: dependent periods");
  const std::size_t k = periods.size();
  const std::size_t dim = v.dim();
  if (k == 0) {
    if (v.is_zero()) return std::vector<BigInt>{};
    return std::nullopt;
  }
  // Gauss-Jordan on the augmented system [P | v] over the rationals.
  std::vector<std::vector<Rational>> m(dim, std::vector<Rational>(k + 1));
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < k; ++c) m[r][c] = Rational(periods[c][r]);
    m[r][k] = Rational(v[r]);
  }
  std::size_t row = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = row;
    while (p < dim && m[p][c] == 0) ++p;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i == row || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = 0; j <= k; ++j) m[i][j] -= f * m[row][j];
    }
    ++row;
  }
  for (std::size_t r = k; r < dim; ++r) {
    if (m[r][k] != 0) return std::nullopt;
  }
  std::vector<BigInt> out;
  for (std::size_t c = 0; c < k; ++c) {
    const Rational& x = m[c][k];
    if (denominator(x) != 1 || x < 0) return std::nullopt;
    out.push_back(numerator(x));
  }
  return out;
}

std::vector<BigInt> find_integer_dependency(std::span<const TermVector> P, const BigInt& entry_bound) {
  (void)entry_bound;  // the bound is a property of the result, not an input to the search
  if (P.empty() || is_linearly_independent(P)) throw PreconditionError("find_integer_dependency: independent input");
  const std::size_t dim = P[0].dim();

  std::size_t last = 0;
  std::vector<TermVector> prefix;
  for (; last < P.size(); ++last) {
    prefix.push_back(P[last]);
    if (!is_linearly_independent(prefix)) break;
  }
  std::vector<std::size_t> subset;
  for (std::size_t i = 0; i <= last; ++i) subset.push_back(i);
  for (std::size_t i = 0; i < last; ++i) {
    std::vector<TermVector> trial;
    for (std::size_t j : subset) {
      if (j != i) trial.push_back(P[j]);
    }
    if (!is_linearly_independent(trial)) subset.erase(std::find(subset.begin(), subset.end(), i));
  }

  std::vector<TermVector> members;
  for (std::size_t j : subset) members.push_back(P[j]);
  const auto beta = kernel_vector(members, dim);
  std::size_t u = 0;
  for (std::size_t i = 1; i < beta.size(); ++i) {
    if (abs(beta[i]) > abs(beta[u])) u = i;
  }

  // Basis M = (members without u) extended by unit vectors.
  std::vector<TermVector> basis;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i != u) basis.push_back(members[i]);
  }
  for (std::size_t e = 0; e < dim && basis.size() < dim; ++e) {
    basis.push_back(TermVector::unit(dim, e));
    if (!is_linearly_independent(basis)) basis.pop_back();
  }
  const IntMatrix m = IntMatrix::from_columns(basis, dim);
  const BigInt det = determinant(m);

  std::vector<BigInt> alpha(P.size(), BigInt(0));
  alpha[subset[u]] = det;
  // (det M) u = M c with c_x = det(M with column x replaced by u).
  std::size_t col = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i == u) continue;
    IntMatrix mx = m;
    for (std::size_t r = 0; r < dim; ++r) mx.at(r, col) = members[u][r];
    alpha[subset[i]] = -determinant(mx);
    ++col;
  }
  for (const auto& a : alpha) {
    if (a == 0) continue;
    if (a < 0) {
      for (auto& b : alpha) b = -b;
    }
    break;
  }
  return alpha;
}

MultiplicityReduction reduce_multiplicities(std::span<const TermVector> P, std::span<const BigInt> n,
                                            const BigInt& entry_bound) {
  if (P.size() != n.size()) throw PreconditionError("reduce_multiplicities: size mismatch");
  const std::size_t dim = P.empty() ? 0 : P[0].dim();
  MultiplicityReduction out;
  out.bound = hadamard_bound(dim, entry_bound);
  out.coefficients.assign(n.begin(), n.end());
  const BigInt& H = out.bound;

  auto above = [&] {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < P.size(); ++i) {
      if (out.coefficients[i] > H) idx.push_back(i);
    }
    return idx;
  };

  for (;;) {
    const auto star = above();
    std::vector<TermVector> vs;
    for (std::size_t i : star) vs.push_back(P[i]);
    if (is_linearly_independent(vs)) break;
    const auto alpha = find_integer_dependency(vs, entry_bound);
    // Subtract alpha until some member of the current set drops to <= H.
    for (bool same = true; same;) {
      for (std::size_t j = 0; j < star.size(); ++j) out.coefficients[star[j]] -= alpha[j];
      for (std::size_t j = 0; j < star.size(); ++j) {
        if (out.coefficients[star[j]] <= H) same = false;
      }
    }
  }

  // P0: every coefficient above H, then greedily those equal to H.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (out.coefficients[i] >= H && out.coefficients[i] > 0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return out.coefficients[a] > out.coefficients[b]; });
  std::vector<TermVector> chosen;
  for (std::size_t i : order) {
    chosen.push_back(P[i]);
    if (is_linearly_independent(chosen)) {
      out.independent.push_back(i);
    } else {
      chosen.pop_back();
    }
  }
  std::sort(out.independent.begin(), out.independent.end());
  return out;
}

LatticeSolver::LatticeSolver(std::vector<TermVector> periods) : periods_(std::move(periods)) {
  const std::size_t r = periods_.size();
  if (r == 0) return;
  const std::size_t dim = periods_[0].dim();
  if (!is_linearly_independent(periods_)) throw PreconditionError("LatticeSolver: dependent periods");
  // Pick r coordinates whose rows are independent.
  std::vector<TermVector> rows;
  for (std::size_t c = 0; c < dim && pivot_rows_.size() < r; ++c) {
    TermVector row(r);
    for (std::size_t j = 0; j < r; ++j) row[j] = periods_[j][c];
    rows.push_back(row);
    if (is_linearly_independent(rows)) {
      pivot_rows_.push_back(c);
    } else {
      rows.pop_back();
    }
  }
  IntMatrix sub(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) sub.at(i, j) = periods_[j][pivot_rows_[i]];
  }
  const BigInt det = determinant(sub);
  const BigInt limit = std::numeric_limits<std::int64_t>::max() / 4;
  auto narrow = [&](const BigInt& x) {
    if (abs(x) > limit) throw CapExceeded("LatticeSolver: coefficients exceed 64-bit range");
    return static_cast<std::int64_t>(x);
  };
  det_ = narrow(det);
  adj_.assign(r * r, 0);
  // adj(i, j) = (-1)^(i+j) * det(minor with row j and column i removed).
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      IntMatrix minor(r - 1, r - 1);
      for (std::size_t a = 0, ra = 0; a < r; ++a) {
        if (a == j) continue;
        for (std::size_t b = 0, cb = 0; b < r; ++b) {
          if (b == i) continue;
          minor.at(ra, cb++) = sub.at(a, b);
        }
        ++ra;
      }
      BigInt cof = determinant(minor);
      if ((i + j) % 2 == 1) cof = -cof;
      adj_[i * r + j] = narrow(cof);
    }
  }
}

std::optional<std::vector<std::int64_t>> LatticeSolver::solve(const TermVector& v) const {
  const std::size_t r = periods_.size();
  if (r == 0) {
    if (v.is_zero()) return std::vector<std::int64_t>{};
    return std::nullopt;
  }
  std::vector<std::int64_t> c(r);
  for (std::size_t i = 0; i < r; ++i) {
    __int128 num = 0;
    for (std::size_t j = 0; j < r; ++j) num += static_cast<__int128>(adj_[i * r + j]) * v[pivot_rows_[j]];
    if (num % det_ != 0) return std::nullopt;
    __int128 q = num / det_;
    if (q < 0) return std::nullopt;
    c[i] = static_cast<std::int64_t>(q);
  }
  for (std::size_t d = 0; d < v.dim(); ++d) {
    __int128 s = 0;
    for (std::size_t i = 0; i < r; ++i) s += static_cast<__int128>(c[i]) * periods_[i][d];
    if (s != v[d]) return std::nullopt;
  }
  return c;
}

}  // namespace parikh
