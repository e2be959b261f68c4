#ifndef PARIKH_LINALG_HPP
#define PARIKH_LINALG_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "parikh/term_vector.hpp"

namespace parikh {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

  // One column per vector; rows index the coordinates.
  static IntMatrix from_columns(std::span<const TermVector> columns, std::size_t dim);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  BigInt max_abs_entry() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

// Exact determinant by fraction-free (Bareiss) elimination.
BigInt determinant(const IntMatrix& m);

// n! * C^n, an upper bound on |det| of an n x n matrix with entries in [-C..C].
BigInt hadamard_bound(std::size_t n, const BigInt& entry_bound);

// Unique solution of m x = b by Cramer's rule, or nullopt when det m = 0.
std::optional<std::vector<Rational>> cramer_solve(const IntMatrix& m, std::span<const BigInt> b);

std::size_t rank(std::span<const TermVector> vectors);
bool is_linearly_independent(std::span<const TermVector> vectors);

/// Coefficients c >= 0 (integers) with sum c_i * periods[i] == v, when the
/// unique rational solution is a nonnegative integer vector. Periods must be
/// linearly independent.
std::optional<std::vector<BigInt>> nonneg_integer_solve(std::span<const TermVector> periods, const TermVector& v);

/**
 * Integer alpha with sum alpha_i P_i = 0, supported on the first minimal
 * dependent subset of P (input order), |alpha_i| <= hadamard_bound(dim, C)
 * and the first nonzero coefficient positive. Throws PreconditionError when P
 * is independent.
 */
std::vector<BigInt> find_integer_dependency(std::span<const TermVector> P, const BigInt& entry_bound);

struct MultiplicityReduction {
  std::vector<BigInt> coefficients;
  std::vector<std::size_t> independent;  // indices of P0, ascending
  BigInt bound;                          // H
};

// Rewrites sum n_i P_i so that every coefficient outside an independent
// subset P0 is at most H = hadamard_bound(dim, C).
MultiplicityReduction reduce_multiplicities(std::span<const TermVector> P, std::span<const BigInt> n,
                                            const BigInt& entry_bound);

// Precomputed solver for repeated nonneg_integer_solve queries against one
// independent period set.
class LatticeSolver {
 public:
  explicit LatticeSolver(std::vector<TermVector> periods);
  std::optional<std::vector<std::int64_t>> solve(const TermVector& v) const;
  const std::vector<TermVector>& periods() const { return periods_; }

 private:
  std::vector<TermVector> periods_;
  std::vector<std::size_t> pivot_rows_;
  std::vector<std::int64_t> adj_;  // r x r adjugate of the pivot submatrix
  std::int64_t det_ = 1;
};

}  // namespace parikh

#endif  // PARIKH_LINALG_HPP
