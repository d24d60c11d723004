#pragma once

#include <algorithm>
#include <complex>
#include <string>

#include <Eigen/Core>

#include "defosc/errors.hpp"

namespace defosc {

enum class OperatorKind { X, P, Raise, Lower, Number, Structure, Hamiltonian, Generic };

inline std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::X: return "X";
    case OperatorKind::P: return "P";
    case OperatorKind::Raise: return "a+";
    case OperatorKind::Lower: return "a-";
    case OperatorKind::Number: return "N";
    case OperatorKind::Structure: return "B";
    case OperatorKind::Hamiltonian: return "H";
    case OperatorKind::Generic: return "generic";
  }
  return "generic";
}

/// Square banded matrix with real coefficients and an optional global factor
/// of i. Entry (i, j) lives at bands(upper + i - j, j), LAPACK style.
template <typename Scalar>
class BandMatrix {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using ComplexDense = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

  BandMatrix(int dim, int lower, int upper, OperatorKind kind = OperatorKind::Generic, bool imaginary = false)
      : dim_(dim), lower_(lower), upper_(upper), kind_(kind), imaginary_(imaginary),
        bands_(Dense::Zero(lower + upper + 1, dim)) {
    if (dim < 1 || lower < 0 || upper < 0) throw DimensionError("BandMatrix: invalid shape");
  }

  static BandMatrix diagonal_matrix(const Vector& d, OperatorKind kind = OperatorKind::Generic) {
    BandMatrix m(static_cast<int>(d.size()), 0, 0, kind);
    m.set_diagonal(0, d);
    return m;
  }

  int dim() const noexcept { return dim_; }
  int lower_bandwidth() const noexcept { return lower_; }
  int upper_bandwidth() const noexcept { return upper_; }
  OperatorKind kind() const noexcept { return kind_; }
  bool imaginary() const noexcept { return imaginary_; }
  void set_kind(OperatorKind k) noexcept { kind_ = k; }

  bool in_band(int i, int j) const noexcept { return j - i <= upper_ && i - j <= lower_; }

  /// Real coefficient at (i, j); the matrix entry is i times this when imaginary().
  Scalar operator()(int i, int j) const {
    if (i < 0 || j < 0 || i >= dim_ || j >= dim_ || !in_band(i, j)) return Scalar(0);
    return bands_(upper_ + i - j, j);
  }

  Scalar& coeffRef(int i, int j) {
    if (i < 0 || j < 0 || i >= dim_ || j >= dim_ || !in_band(i, j)) {
      throw DimensionError("BandMatrix: entry outside band");
    }
    return bands_(upper_ + i - j, j);
  }

  /// Diagonal with offset k (k > 0 above the main diagonal), length dim - |k|.
  Vector diagonal(int k) const {
    const int len = std::max(0, dim_ - std::abs(k));
    Vector v(len);
    for (int t = 0; t < len; ++t) v(t) = k >= 0 ? (*this)(t, t + k) : (*this)(t - k, t);
    return v;
  }

  void set_diagonal(int k, const Vector& v) {
    const int len = dim_ - std::abs(k);
    if (v.size() != len) throw DimensionError("BandMatrix: diagonal length mismatch");
    for (int t = 0; t < len; ++t) {
      if (k >= 0) coeffRef(t, t + k) = v(t);
      else coeffRef(t - k, t) = v(t);
    }
  }

  Dense coefficients() const {
    Dense m = Dense::Zero(dim_, dim_);
    for (int j = 0; j < dim_; ++j) {
      for (int i = std::max(0, j - upper_); i <= std::min(dim_ - 1, j + lower_); ++i) m(i, j) = (*this)(i, j);
    }
    return m;
  }

  ComplexDense to_dense() const {
    const std::complex<Scalar> unit = imaginary_ ? std::complex<Scalar>(0, 1) : std::complex<Scalar>(1, 0);
    return coefficients().template cast<std::complex<Scalar>>() * unit;
  }

  BandMatrix transpose() const {
    BandMatrix t(dim_, upper_, lower_, kind_, imaginary_);
    for (int j = 0; j < dim_; ++j) {
      for (int i = std::max(0, j - upper_); i <= std::min(dim_ - 1, j + lower_); ++i) t.coeffRef(j, i) = (*this)(i, j);
    }
    return t;
  }

  /// max |entry| over rows and columns < limit, and over the rest.
  std::pair<Scalar, Scalar> split_max_abs(int limit) const {
    using std::abs;
    Scalar inner(0), outer(0);
    for (int j = 0; j < dim_; ++j) {
      for (int i = std::max(0, j - upper_); i <= std::min(dim_ - 1, j + lower_); ++i) {
        const Scalar v = abs((*this)(i, j));
        if (i < limit && j < limit) inner = std::max(inner, v);
        else outer = std::max(outer, v);
      }
    }
    return {inner, outer};
  }

  BandMatrix& operator*=(Scalar s) {
    bands_ *= s;
    return *this;
  }

  friend BandMatrix operator*(Scalar s, BandMatrix m) { return m *= s; }

  friend BandMatrix operator*(const BandMatrix& a, const BandMatrix& b) {
    check_dims(a, b);
    const int n = a.dim_;
    BandMatrix c(n, std::min(n - 1, a.lower_ + b.lower_), std::min(n - 1, a.upper_ + b.upper_), OperatorKind::Generic,
                 a.imaginary_ != b.imaginary_);
    const Scalar sign = (a.imaginary_ && b.imaginary_) ? Scalar(-1) : Scalar(1);
    for (int j = 0; j < n; ++j) {
      for (int k = std::max(0, j - b.upper_); k <= std::min(n - 1, j + b.lower_); ++k) {
        const Scalar bkj = b(k, j);
        if (bkj == Scalar(0)) continue;
        for (int i = std::max(0, k - a.upper_); i <= std::min(n - 1, k + a.lower_); ++i) {
          c.coeffRef(i, j) += sign * a(i, k) * bkj;
        }
      }
    }
    return c;
  }

  friend BandMatrix operator+(const BandMatrix& a, const BandMatrix& b) { return combine(a, b, Scalar(1)); }
  friend BandMatrix operator-(const BandMatrix& a, const BandMatrix& b) { return combine(a, b, Scalar(-1)); }

 private:
  static void check_dims(const BandMatrix& a, const BandMatrix& b) {
    if (a.dim_ != b.dim_) {
      throw DimensionError("BandMatrix: dimension mismatch " + std::to_string(a.dim_) + " vs " + std::to_string(b.dim_));
    }
  }

  static bool is_zero(const BandMatrix& m) { return m.bands_.isZero(0); }

  static BandMatrix combine(const BandMatrix& a, const BandMatrix& b, Scalar sb) {
    check_dims(a, b);
    bool imaginary = a.imaginary_;
    if (a.imaginary_ != b.imaginary_) {
      if (is_zero(a)) imaginary = b.imaginary_;
      else if (!is_zero(b)) throw Error("BandMatrix: cannot add real and imaginary matrices");
    }
    BandMatrix c(a.dim_, std::max(a.lower_, b.lower_), std::max(a.upper_, b.upper_), OperatorKind::Generic, imaginary);
    for (int j = 0; j < a.dim_; ++j) {
      for (int i = std::max(0, j - c.upper_); i <= std::min(a.dim_ - 1, j + c.lower_); ++i) {
        c.coeffRef(i, j) = a(i, j) + sb * b(i, j);
      }
    }
    return c;
  }

  int dim_;
  int lower_;
  int upper_;
  OperatorKind kind_;
  bool imaginary_;
  Dense bands_;
};

/// [m1, m2] = m1 m2 - m2 m1.
template <typename Scalar>
BandMatrix<Scalar> commutator(const BandMatrix<Scalar>& m1, const BandMatrix<Scalar>& m2) {
  return m1 * m2 - m2 * m1;
}

/// D m D with D = diag(signs); a diagonal gauge transformation.
template <typename Scalar>
BandMatrix<Scalar> gauge_transform(const BandMatrix<Scalar>& m, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& signs) {
  if (signs.size() != m.dim()) throw DimensionError("gauge_transform: sign vector length mismatch");
  BandMatrix<Scalar> out = m;
  for (int j = 0; j < m.dim(); ++j) {
    for (int i = std::max(0, j - m.upper_bandwidth()); i <= std::min(m.dim() - 1, j + m.lower_bandwidth()); ++i) {
      out.coeffRef(i, j) = signs(i) * m(i, j) * signs(j);
    }
  }
  return out;
}

}  // namespace defosc
