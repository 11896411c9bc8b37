#pragma once

// Exact dense linear algebra over a field scalar (in practice GMP rationals).
// Everything here is elimination based; no pivoting by magnitude, pivots are
// the first nonzero entry so that results are reproducible.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mincomplex {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowMajorMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using QMatrix = Matrix<Rational>;
using QVector = Vector<Rational>;
using Index = Eigen::Index;

template <typename Scalar>
inline bool is_zero(const Scalar& x) {
  return x == Scalar(0);
}

template <>
inline bool is_zero<Rational>(const Rational& x) {
  return x.sign() == 0;
}

template <typename Scalar>
struct RowEchelon {
  /// Reduced row echelon form; nonzero rows first.
  Matrix<Scalar> reduced;
  /// Pivot column of each nonzero row, increasing.
  std::vector<Index> pivots;

  Index rank() const { return static_cast<Index>(pivots.size()); }
};

namespace detail {

// Gauss-Jordan on a row-major working copy. When `reduce_above` is false only
// forward elimination is done (enough for rank and determinant).
template <typename Scalar>
std::vector<Index> eliminate(RowMajorMatrix<Scalar>& a, bool reduce_above, Scalar* det_sign = nullptr) {
  const Index rows = a.rows();
  const Index cols = a.cols();
  std::vector<Index> pivots;
  std::vector<Index> support;
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index p = r;
    while (p < rows && is_zero(a(p, c))) ++p;
    if (p == rows) continue;
    if (p != r) {
      a.row(p).swap(a.row(r));
      if (det_sign) *det_sign = -*det_sign;
    }
    if (det_sign) *det_sign *= a(r, c);
    const Scalar inv = Scalar(1) / a(r, c);
    support.clear();
    for (Index j = c; j < cols; ++j) {
      if (!is_zero(a(r, j))) {
        a(r, j) *= inv;
        support.push_back(j);
      }
    }
    const Index first = reduce_above ? 0 : r + 1;
    for (Index i = first; i < rows; ++i) {
      if (i == r || is_zero(a(i, c))) continue;
      const Scalar f = a(i, c);
      for (Index j : support) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

template <typename Derived>
RowEchelon<typename Derived::Scalar> row_echelon(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  RowMajorMatrix<Scalar> work = input;
  RowEchelon<Scalar> out;
  out.pivots = detail::eliminate(work, true);
  out.reduced = work;
  return out;
}

template <typename Derived>
Index rank(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  if (input.rows() == 0 || input.cols() == 0) return 0;
  RowMajorMatrix<Scalar> work = input;
  return static_cast<Index>(detail::eliminate(work, false).size());
}

template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  if (input.rows() != input.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (input.rows() == 0) return Scalar(1);
  RowMajorMatrix<Scalar> work = input;
  Scalar det(1);
  auto pivots = detail::eliminate(work, false, &det);
  if (static_cast<Index>(pivots.size()) < input.rows()) return Scalar(0);
  return det;
}

/// Basis of {x : A x = 0} as columns, one per free column of the echelon form.
template <typename Derived>
Matrix<typename Derived::Scalar> kernel(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const Index cols = a.cols();
  if (a.rows() == 0) return Matrix<Scalar>::Identity(cols, cols);
  auto ech = row_echelon(a);
  std::vector<bool> is_pivot(cols, false);
  for (Index p : ech.pivots) is_pivot[p] = true;
  Matrix<Scalar> out = Matrix<Scalar>::Zero(cols, cols - ech.rank());
  Index k = 0;
  for (Index f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    out(f, k) = Scalar(1);
    for (Index r = 0; r < ech.rank(); ++r) {
      if (!is_zero(ech.reduced(r, f))) out(ech.pivots[r], k) = -ech.reduced(r, f);
    }
    ++k;
  }
  return out;
}

/// Canonical basis (as columns) of the column space: the nonzero rows of the
/// reduced echelon form of the transpose.
template <typename Derived>
Matrix<typename Derived::Scalar> image_basis(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.cols() == 0) return Matrix<Scalar>(a.rows(), 0);
  auto ech = row_echelon(a.transpose());
  return ech.reduced.topRows(ech.rank()).transpose();
}

/// Rows spanning the annihilator of the column space: C v = 0 iff v is in span(W).
template <typename Derived>
Matrix<typename Derived::Scalar> annihilator(const Eigen::MatrixBase<Derived>& w) {
  return kernel(w.transpose()).transpose();
}

/// Particular solution of A x = b with free variables set to zero.
template <typename DerivedA, typename DerivedB>
std::optional<Vector<typename DerivedA::Scalar>> solve(const Eigen::MatrixBase<DerivedA>& a,
                                                       const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Matrix<Scalar> aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  auto ech = row_echelon(aug);
  Vector<Scalar> x = Vector<Scalar>::Zero(a.cols());
  for (Index r = 0; r < ech.rank(); ++r) {
    if (ech.pivots[r] == a.cols()) return std::nullopt;
    x(ech.pivots[r]) = ech.reduced(r, a.cols());
  }
  return x;
}

/// Solves A X = B column by column; nullopt if any column is inconsistent.
template <typename DerivedA, typename DerivedB>
std::optional<Matrix<typename DerivedA::Scalar>> solve_many(const Eigen::MatrixBase<DerivedA>& a,
                                                            const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Matrix<Scalar> aug(a.rows(), a.cols() + b.cols());
  aug.leftCols(a.cols()) = a;
  aug.rightCols(b.cols()) = b;
  auto ech = row_echelon(aug);
  Matrix<Scalar> x = Matrix<Scalar>::Zero(a.cols(), b.cols());
  for (Index r = 0; r < ech.rank(); ++r) {
    const Index p = ech.pivots[r];
    if (p >= a.cols()) return std::nullopt;
    x.row(p) = ech.reduced.row(r).tail(b.cols());
  }
  return x;
}

template <typename Scalar>
Matrix<Scalar> hstack(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  Matrix<Scalar> out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

/// Incrementally maintained echelon basis of a subspace; used for greedy
/// basis completion where the order of insertion decides the outcome.
template <typename Scalar>
class EchelonBasis {
 public:
  explicit EchelonBasis(Index ambient) : ambient_(ambient) {}

  Index ambient() const { return ambient_; }
  Index dimension() const { return static_cast<Index>(rows_.size()); }

  /// Reduces v against the basis; returns the remainder.
  Vector<Scalar> reduce(Vector<Scalar> v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Index p = pivots_[i];
      if (is_zero(v(p))) continue;
      const Scalar f = v(p);
      for (Index j : supports_[i]) v(j) -= f * rows_[i](j);
    }
    return v;
  }

  bool contains(const Vector<Scalar>& v) const { return reduce(v).isZero(); }

  /// Adds v if independent; returns whether it was added.
  bool insert(const Vector<Scalar>& v) {
    Vector<Scalar> r = reduce(v);
    Index p = 0;
    while (p < ambient_ && is_zero(r(p))) ++p;
    if (p == ambient_) return false;
    const Scalar inv = Scalar(1) / r(p);
    std::vector<Index> support;
    for (Index j = p; j < ambient_; ++j) {
      if (!is_zero(r(j))) {
        r(j) *= inv;
        support.push_back(j);
      }
    }
    // Keep earlier rows reduced at the new pivot so reduce() stays one pass.
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (is_zero(rows_[i](p))) continue;
      const Scalar f = rows_[i](p);
      for (Index j : support) rows_[i](j) -= f * r(j);
      supports_[i] = support_of(rows_[i]);
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    supports_.push_back(std::move(support));
    return true;
  }

  template <typename Derived>
  void insert_columns(const Eigen::MatrixBase<Derived>& m) {
    for (Index c = 0; c < m.cols(); ++c) insert(m.col(c));
  }

  Matrix<Scalar> basis() const {
    Matrix<Scalar> out(ambient_, dimension());
    for (Index i = 0; i < dimension(); ++i) out.col(i) = rows_[i];
    return out;
  }

 private:
  std::vector<Index> support_of(const Vector<Scalar>& v) const {
    std::vector<Index> s;
    for (Index j = 0; j < v.size(); ++j)
      if (!is_zero(v(j))) s.push_back(j);
    return s;
  }

  Index ambient_;
  std::vector<Vector<Scalar>> rows_;
  std::vector<Index> pivots_;
  std::vector<std::vector<Index>> supports_;
};

/// Sparse-aware product; Eigen's generic kernel does not skip zero rationals.
template <typename Scalar>
Matrix<Scalar> multiply(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Matrix<Scalar> out = Matrix<Scalar>::Zero(a.rows(), b.cols());
  for (Index k = 0; k < a.cols(); ++k) {
    for (Index j = 0; j < b.cols(); ++j) {
      if (is_zero(b(k, j))) continue;
      const Scalar& bkj = b(k, j);
      for (Index i = 0; i < a.rows(); ++i) {
        if (!is_zero(a(i, k))) out(i, j) += a(i, k) * bkj;
      }
    }
  }
  return out;
}

}  // namespace mincomplex
