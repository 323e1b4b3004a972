#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "perimere/real_basis.hpp"

namespace perimere {

using BigInt = mpz_class;

/// Dense integer matrix, column-major. Columns are read as lattice vectors.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  static IntMatrix identity(std::size_t d);
  static IntMatrix from_columns(std::size_t rows,
                                const std::vector<std::vector<std::int64_t>>& columns);
  /// Row-major nested list, as written by hand: {{2, 0}, {0, 1}}.
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return cols_ == 0; }

  BigInt& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<BigInt> column(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const BigInt> column(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

  void append_column(std::span<const BigInt> v);
  void append_column(std::span<const std::int64_t> v);
  void swap_columns(std::size_t j, std::size_t k);
  /// Keep the first `n` columns.
  void truncate_columns(std::size_t n);

  /// Largest absolute entry; 0 for an empty matrix.
  BigInt magnitude() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// Sublattice of Z^d stored in canonical (column) Hermite normal form.
///
/// Each column has strictly more leading zeros than its predecessor, every
/// pivot is positive, and entries left of a pivot in its row lie in
/// [0, pivot). The form is unique, so two bases are equal iff they span the
/// same lattice.
class SublatticeBasis {
 public:
  /// The zero lattice in Z^d.
  explicit SublatticeBasis(std::size_t ambient_dim = 0);

  static SublatticeBasis zero(std::size_t d) { return SublatticeBasis(d); }
  static SublatticeBasis full(std::size_t d);

  std::size_t ambient_dim() const { return columns_.rows(); }
  std::size_t rank() const { return columns_.cols(); }
  const IntMatrix& columns() const { return columns_; }
  std::span<const BigInt> column(std::size_t j) const { return columns_.column(j); }
  /// Row index of the pivot of column j.
  std::size_t pivot_row(std::size_t j) const { return pivot_rows_[j]; }
  const BigInt& pivot(std::size_t j) const { return columns_(pivot_rows_[j], j); }

  std::string to_string() const;

  friend bool operator==(const SublatticeBasis& a, const SublatticeBasis& b) {
    return a.columns_ == b.columns_;
  }

 private:
  friend SublatticeBasis hnf_reduce(IntMatrix m);
  IntMatrix columns_;
  std::vector<std::size_t> pivot_rows_;
};

/// Canonical HNF of the lattice spanned by the columns of `m`, computed with
/// the column-Euclid reduction (negate, swap, subtract a multiple).
SublatticeBasis hnf_reduce(IntMatrix m);

/// Column-echelon reduction that also applies every column operation to
/// `transform` (which must have m.cols() columns). Returns the rank; columns
/// at index >= rank are zero afterwards.
std::size_t hnf_reduce_tracked(IntMatrix& m, IntMatrix& transform);

SublatticeBasis lattice_sum(const SublatticeBasis& a, const SublatticeBasis& b);
SublatticeBasis intersection(const SublatticeBasis& a, const SublatticeBasis& b);

bool member(const SublatticeBasis& lattice, std::span<const BigInt> v);
bool member(const SublatticeBasis& lattice, std::span<const std::int64_t> v);

/// True iff every column of `inner` lies in `outer`.
bool is_sublattice(const SublatticeBasis& inner, const SublatticeBasis& outer);

/// p-dimensional volume of the real lattice spanned by U times the columns
/// of `lattice`: sqrt(det(G^T G)). Returns 1 for the zero lattice.
double volume(const RealBasis& basis, const SublatticeBasis& lattice);

/// Volume of the unit ball in R^q: pi^(q/2) / Gamma(q/2 + 1).
double unit_ball_volume(int q);

/// Reduction of integer vectors modulo a full-rank sublattice S * Z^d.
class CosetReducer {
 public:
  explicit CosetReducer(const IntMatrix& generators);

  std::size_t dim() const { return hnf_.rows(); }
  /// |det S|, the number of cosets.
  std::uint64_t index() const { return index_; }

  /// All canonical representatives, zero vector first.
  std::vector<std::vector<std::int64_t>> representatives() const;
  std::vector<std::int64_t> canonical(std::span<const std::int64_t> v) const;
  /// Integer t with S * t = w; throws if w is not in S * Z^d.
  std::vector<std::int64_t> solve(std::span<const std::int64_t> w) const;

 private:
  IntMatrix hnf_;        // lower triangular, positive diagonal
  IntMatrix transform_;  // S * transform_ = hnf_
  std::vector<std::int64_t> diagonal_;
  std::uint64_t index_ = 0;
};

std::vector<std::vector<std::int64_t>> coset_reps(const IntMatrix& s);
std::vector<std::int64_t> canonical_coset(const IntMatrix& s, std::span<const std::int64_t> v);

/// Number of distinct classes of Z^d / L that contain a point x with
/// |U x| <= radius. Enumerates a bounding box of integer points; throws
/// BudgetExceeded when the box holds more than `budget` points.
std::uint64_t count_cosets_in_ball(const RealBasis& basis, const SublatticeBasis& lattice,
                                   double radius, std::uint64_t budget);

}  // namespace perimere
