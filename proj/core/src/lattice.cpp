#include "perimere/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_set>

#include "perimere/error.hpp"

namespace perimere {

namespace {

std::int64_t to_int64(const BigInt& x, const char* what) {
  if (!x.fits_slong_p()) {
    throw InputError(std::string(what) + ": integer does not fit in 64 bits");
  }
  return x.get_si();
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Column operations applied to the matrix being reduced and, when present,
// to a companion matrix that records the unimodular transform.
class ColumnOps {
 public:
  ColumnOps(IntMatrix& m, IntMatrix* track) : m_(m), track_(track) {}

  void negate(std::size_t j, std::size_t from_row) {
    for (std::size_t i = from_row; i < m_.rows(); ++i) {
      m_(i, j) = -m_(i, j);
    }
    if (track_ != nullptr) {
      for (auto& x : track_->column(j)) {
        x = -x;
      }
    }
  }

  void swap(std::size_t j, std::size_t k) {
    if (j == k) {
      return;
    }
    m_.swap_columns(j, k);
    if (track_ != nullptr) {
      track_->swap_columns(j, k);
    }
  }

  // column j -= q * column k
  void submul(std::size_t j, std::size_t k, const BigInt& q, std::size_t from_row) {
    if (q == 0) {
      return;
    }
    for (std::size_t i = from_row; i < m_.rows(); ++i) {
      m_(i, j) -= q * m_(i, k);
    }
    if (track_ != nullptr) {
      for (std::size_t i = 0; i < track_->rows(); ++i) {
        (*track_)(i, j) -= q * (*track_)(i, k);
      }
    }
  }

 private:
  IntMatrix& m_;
  IntMatrix* track_;
};

// Row-by-row Euclid reduction to canonical column Hermite normal form.
// Columns j.. are zero in every row above the current one, so operations on
// them only touch rows >= i.
std::size_t echelon(IntMatrix& m, IntMatrix* track, std::vector<std::size_t>* pivots) {
  ColumnOps ops(m, track);
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t j = 0;
  for (std::size_t i = 0; i < rows && j < cols; ++i) {
    std::size_t l = j;
    while (l < cols && m(i, l) == 0) {
      ++l;
    }
    if (l == cols) {
      continue;
    }
    ops.swap(j, l);
    if (m(i, j) < 0) {
      ops.negate(j, i);
    }
    for (std::size_t k = j + 1; k < cols; ++k) {
      if (m(i, k) == 0) {
        continue;
      }
      if (m(i, k) < 0) {
        ops.negate(k, i);
      }
      while (m(i, j) > 0 && m(i, k) > 0) {
        const BigInt q = m(i, j) / m(i, k);
        ops.submul(j, k, q, i);
        ops.swap(j, k);
      }
    }
    for (std::size_t k = 0; k < j; ++k) {
      ops.submul(k, j, floor_div(m(i, k), m(i, j)), i);
    }
    if (pivots != nullptr) {
      pivots->push_back(i);
    }
    ++j;
  }
  return j;
}

}  // namespace

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix IntMatrix::identity(std::size_t d) {
  IntMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, i) = 1;
  }
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows,
                                  const std::vector<std::vector<std::int64_t>>& columns) {
  IntMatrix m(rows, 0);
  for (const auto& c : columns) {
    m.append_column(std::span<const std::int64_t>(c));
  }
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) {
      throw InputError("ragged integer matrix");
    }
    for (std::size_t j = 0; j < c; ++j) {
      m(i, j) = static_cast<long>(rows[i][j]);
    }
  }
  return m;
}

void IntMatrix::append_column(std::span<const BigInt> v) {
  if (v.size() != rows_) {
    throw InputError("column length does not match the row count");
  }
  data_.insert(data_.end(), v.begin(), v.end());
  ++cols_;
}

void IntMatrix::append_column(std::span<const std::int64_t> v) {
  if (v.size() != rows_) {
    throw InputError("column length does not match the row count");
  }
  for (auto x : v) {
    data_.emplace_back(static_cast<long>(x));
  }
  ++cols_;
}

void IntMatrix::swap_columns(std::size_t j, std::size_t k) {
  for (std::size_t i = 0; i < rows_; ++i) {
    (*this)(i, j).swap((*this)(i, k));
  }
}

void IntMatrix::truncate_columns(std::size_t n) {
  if (n < cols_) {
    data_.resize(n * rows_);
    cols_ = n;
  }
}

BigInt IntMatrix::magnitude() const {
  BigInt best = 0;
  for (const auto& x : data_) {
    if (abs(x) > best) {
      best = abs(x);
    }
  }
  return best;
}

SublatticeBasis::SublatticeBasis(std::size_t ambient_dim) : columns_(ambient_dim, 0) {}

SublatticeBasis SublatticeBasis::full(std::size_t d) { return hnf_reduce(IntMatrix::identity(d)); }

std::string SublatticeBasis::to_string() const {
  std::ostringstream out;
  out << "Lambda(";
  for (std::size_t j = 0; j < rank(); ++j) {
    out << (j == 0 ? "(" : ",(");
    for (std::size_t i = 0; i < ambient_dim(); ++i) {
      out << (i == 0 ? "" : ",") << columns_(i, j).get_str();
    }
    out << ")";
  }
  out << ")";
  return out.str();
}

SublatticeBasis hnf_reduce(IntMatrix m) {
  SublatticeBasis out(m.rows());
  std::vector<std::size_t> pivots;
  const std::size_t rank = echelon(m, nullptr, &pivots);
  m.truncate_columns(rank);
  out.columns_ = std::move(m);
  out.pivot_rows_ = std::move(pivots);
  return out;
}

std::size_t hnf_reduce_tracked(IntMatrix& m, IntMatrix& transform) {
  if (transform.cols() != m.cols()) {
    throw InputError("transform must have one column per input column");
  }
  return echelon(m, &transform, nullptr);
}

SublatticeBasis lattice_sum(const SublatticeBasis& a, const SublatticeBasis& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw InputError("lattice_sum: ambient dimensions differ");
  }
  if (b.rank() == 0) {
    return a;
  }
  if (a.rank() == 0) {
    return b;
  }
  IntMatrix m = a.columns();
  for (std::size_t j = 0; j < b.rank(); ++j) {
    m.append_column(b.column(j));
  }
  return hnf_reduce(std::move(m));
}

SublatticeBasis intersection(const SublatticeBasis& a, const SublatticeBasis& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw InputError("intersection: ambient dimensions differ");
  }
  const std::size_t d = a.ambient_dim();
  const std::size_t p = a.rank();
  const std::size_t q = b.rank();
  if (p == 0 || q == 0) {
    return SublatticeBasis(d);
  }
  // Integer kernel of [A | -B]: every (x, y) with A x = B y.
  IntMatrix stacked = a.columns();
  for (std::size_t j = 0; j < q; ++j) {
    std::vector<BigInt> neg(b.column(j).begin(), b.column(j).end());
    for (auto& x : neg) {
      x = -x;
    }
    stacked.append_column(std::span<const BigInt>(neg));
  }
  IntMatrix transform = IntMatrix::identity(p + q);
  const std::size_t rank = hnf_reduce_tracked(stacked, transform);
  IntMatrix image(d, 0);
  std::vector<BigInt> v(d);
  for (std::size_t k = rank; k < p + q; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      v[i] = 0;
      for (std::size_t j = 0; j < p; ++j) {
        v[i] += a.columns()(i, j) * transform(j, k);
      }
    }
    image.append_column(std::span<const BigInt>(v));
  }
  return hnf_reduce(std::move(image));
}

bool member(const SublatticeBasis& lattice, std::span<const BigInt> v) {
  const std::size_t d = lattice.ambient_dim();
  if (v.size() != d) {
    throw InputError("member: vector length does not match the lattice dimension");
  }
  std::vector<BigInt> r(v.begin(), v.end());
  std::size_t row = 0;
  BigInt q;
  for (std::size_t j = 0; j < lattice.rank(); ++j) {
    const std::size_t p = lattice.pivot_row(j);
    for (; row < p; ++row) {
      if (r[row] != 0) {
        return false;
      }
    }
    const BigInt& pivot = lattice.pivot(j);
    if (!mpz_divisible_p(r[p].get_mpz_t(), pivot.get_mpz_t())) {
      return false;
    }
    mpz_divexact(q.get_mpz_t(), r[p].get_mpz_t(), pivot.get_mpz_t());
    if (q != 0) {
      const auto col = lattice.column(j);
      for (std::size_t i = p; i < d; ++i) {
        r[i] -= q * col[i];
      }
    }
    row = p + 1;
  }
  for (; row < d; ++row) {
    if (r[row] != 0) {
      return false;
    }
  }
  return true;
}

bool member(const SublatticeBasis& lattice, std::span<const std::int64_t> v) {
  std::vector<BigInt> big;
  big.reserve(v.size());
  for (auto x : v) {
    big.emplace_back(static_cast<long>(x));
  }
  return member(lattice, std::span<const BigInt>(big));
}

bool is_sublattice(const SublatticeBasis& inner, const SublatticeBasis& outer) {
  for (std::size_t j = 0; j < inner.rank(); ++j) {
    if (!member(outer, inner.column(j))) {
      return false;
    }
  }
  return true;
}

double volume(const RealBasis& basis, const SublatticeBasis& lattice) {
  const std::size_t p = lattice.rank();
  if (p == 0) {
    return 1.0;
  }
  const auto d = static_cast<Eigen::Index>(lattice.ambient_dim());
  if (static_cast<std::size_t>(d) != basis.dim()) {
    throw InputError("volume: lattice and basis dimensions differ");
  }
  Eigen::MatrixXd v(d, static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      v(i, static_cast<Eigen::Index>(j)) = lattice.columns()(static_cast<std::size_t>(i), j).get_d();
    }
  }
  const Eigen::MatrixXd g = basis.matrix() * v;
  const Eigen::MatrixXd gram = g.transpose() * g;
  return std::sqrt(std::max(0.0, gram.determinant()));
}

double unit_ball_volume(int q) {
  if (q < 0) {
    throw InputError("unit_ball_volume: negative dimension");
  }
  if (q == 0) {
    return 1.0;
  }
  const double half = 0.5 * q;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

CosetReducer::CosetReducer(const IntMatrix& generators) {
  const std::size_t d = generators.rows();
  if (generators.cols() != d || d == 0) {
    throw InputError("sublattice matrix must be square and non-empty");
  }
  hnf_ = generators;
  transform_ = IntMatrix::identity(d);
  if (hnf_reduce_tracked(hnf_, transform_) != d) {
    throw InputError("sublattice matrix is singular");
  }
  // Full rank: pivots sit on the diagonal.
  BigInt index = 1;
  for (std::size_t i = 0; i < d; ++i) {
    diagonal_.push_back(to_int64(hnf_(i, i), "sublattice pivot"));
    index *= hnf_(i, i);
  }
  if (!index.fits_ulong_p()) {
    throw InputError("sublattice index too large");
  }
  index_ = index.get_ui();
}

std::vector<std::vector<std::int64_t>> CosetReducer::representatives() const {
  const std::size_t d = dim();
  std::vector<std::vector<std::int64_t>> reps;
  reps.reserve(index_);
  std::vector<std::int64_t> digits(d, 0);
  for (std::uint64_t n = 0; n < index_; ++n) {
    reps.push_back(digits);
    // Mixed-radix increment, first coordinate fastest.
    for (std::size_t i = 0; i < d; ++i) {
      if (++digits[i] < diagonal_[i]) {
        break;
      }
      digits[i] = 0;
    }
  }
  return reps;
}

std::vector<std::int64_t> CosetReducer::canonical(std::span<const std::int64_t> v) const {
  const std::size_t d = dim();
  if (v.size() != d) {
    throw InputError("canonical_coset: vector length does not match the dimension");
  }
  std::vector<BigInt> r;
  r.reserve(d);
  for (auto x : v) {
    r.emplace_back(static_cast<long>(x));
  }
  for (std::size_t j = 0; j < d; ++j) {
    const BigInt q = floor_div(r[j], hnf_(j, j));
    if (q != 0) {
      for (std::size_t i = j; i < d; ++i) {
        r[i] -= q * hnf_(i, j);
      }
    }
  }
  std::vector<std::int64_t> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    out[i] = r[i].get_si();
  }
  return out;
}

std::vector<std::int64_t> CosetReducer::solve(std::span<const std::int64_t> w) const {
  const std::size_t d = dim();
  std::vector<BigInt> r;
  r.reserve(d);
  for (auto x : w) {
    r.emplace_back(static_cast<long>(x));
  }
  // Forward substitution against the lower-triangular HNF.
  std::vector<BigInt> y(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (!mpz_divisible_p(r[j].get_mpz_t(), hnf_(j, j).get_mpz_t())) {
      throw InputError("vector is not in the sublattice");
    }
    mpz_divexact(y[j].get_mpz_t(), r[j].get_mpz_t(), hnf_(j, j).get_mpz_t());
    for (std::size_t i = j; i < d; ++i) {
      r[i] -= y[j] * hnf_(i, j);
    }
  }
  std::vector<std::int64_t> t(d);
  for (std::size_t i = 0; i < d; ++i) {
    BigInt acc = 0;
    for (std::size_t j = 0; j < d; ++j) {
      acc += transform_(i, j) * y[j];
    }
    t[i] = to_int64(acc, "sublattice coordinates");
  }
  return t;
}

std::vector<std::vector<std::int64_t>> coset_reps(const IntMatrix& s) {
  return CosetReducer(s).representatives();
}

std::vector<std::int64_t> canonical_coset(const IntMatrix& s, std::span<const std::int64_t> v) {
  return CosetReducer(s).canonical(v);
}

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

std::uint64_t count_cosets_in_ball(const RealBasis& basis, const SublatticeBasis& lattice,
                                   double radius, std::uint64_t budget) {
  const std::size_t d = basis.dim();
  if (lattice.ambient_dim() != d) {
    throw InputError("count_cosets_in_ball: lattice and basis dimensions differ");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InputError("count_cosets_in_ball: radius must be positive");
  }
  // |z_i| = |(U^-1 x)_i| <= |row_i(U^-1)| * |x|.
  std::vector<std::int64_t> bound(d);
  double box = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double b = std::floor(basis.inverse().row(static_cast<Eigen::Index>(i)).norm() * radius);
    if (b > 1e15) {
      throw BudgetExceeded("enumeration box is too large");
    }
    bound[i] = static_cast<std::int64_t>(b);
    box *= 2.0 * b + 1.0;
  }
  if (box > static_cast<double>(budget)) {
    std::ostringstream msg;
    msg << "enumeration needs " << box << " points, budget is " << budget;
    throw BudgetExceeded(msg.str());
  }

  std::vector<std::vector<std::int64_t>> cols(lattice.rank(), std::vector<std::int64_t>(d));
  for (std::size_t j = 0; j < lattice.rank(); ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      cols[j][i] = to_int64(lattice.columns()(i, j), "lattice entry");
    }
  }

  std::unordered_set<std::vector<std::int64_t>, VectorHash> classes;
  std::vector<std::int64_t> z(d);
  for (std::size_t i = 0; i < d; ++i) {
    z[i] = -bound[i];
  }
  const double r2 = radius * radius;
  Eigen::VectorXd zv(static_cast<Eigen::Index>(d));
  std::vector<std::int64_t> red(d);
  while (true) {
    for (std::size_t i = 0; i < d; ++i) {
      zv(static_cast<Eigen::Index>(i)) = static_cast<double>(z[i]);
    }
    if ((basis.matrix() * zv).squaredNorm() <= r2) {
      red = z;
      for (std::size_t j = 0; j < lattice.rank(); ++j) {
        const std::size_t p = lattice.pivot_row(j);
        const std::int64_t pivot = cols[j][p];
        std::int64_t q = red[p] / pivot;
        if (red[p] % pivot != 0 && red[p] < 0) {
          --q;
        }
        if (q != 0) {
          for (std::size_t i = p; i < d; ++i) {
            red[i] -= q * cols[j][i];
          }
        }
      }
      classes.insert(red);
    }
    std::size_t i = 0;
    for (; i < d; ++i) {
      if (++z[i] <= bound[i]) {
        break;
      }
      z[i] = -bound[i];
    }
    if (i == d) {
      break;
    }
  }
  return classes.size();
}

}  // namespace perimere
