#pragma once

// Fibonacci numbers and their generalizations, the Filbert matrix in exact
// rational arithmetic, and the moment functional of the reciprocal Fibonacci
// numbers.
//
// Two indexings appear side by side:
//   shifted convention    F_0 = F_1 = 1      (1, 1, 2, 3, 5, 8, ...)
//   classical convention  F_1 = F_2 = 1      (F^cl_k = F_{k-1})
// fib() uses the former; the Filbert and reciprocal-moment constructions are
// stated in the latter.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "defosc/errors.hpp"
#include "defosc/qseries.hpp"

namespace defosc {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using HighPrecision = boost::multiprecision::cpp_bin_float_50;

enum class FibConvention { Shifted, Classical };

/// Shifted convention, iterative addition.
BigInt fib(int n);

/// Shifted convention, fast doubling on the classical sequence.
BigInt fib_doubling(int n);

/// Classical F^cl_k with F^cl_0 = 0.
BigInt classical_fib(int k);

/// 1 / F_{n+2}. The classical convention (1, 1/2, 1/3, 1/5, ...) is the
/// probability moment sequence; the shifted convention gives 1/2, 1/3, 1/5, ...
BigRational berg_moment(int n, FibConvention convention = FibConvention::Classical);

/// Dense square matrix of exact rationals, row-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}

  static RationalMatrix identity(int n);

  int size() const noexcept { return n_; }
  BigRational& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  const BigRational& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }

  bool is_integer() const;
  bool operator==(const RationalMatrix& other) const = default;

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);

 private:
  int n_ = 0;
  std::vector<BigRational> data_;
};

/// n x n matrix with entries 1/F^cl_{i+j+shift}, 1-based i, j. shift = -1 is
/// Richardson's Filbert matrix; any shift >= -1 keeps the inverse integral.
RationalMatrix filbert_matrix(int n, int shift = -1);

/// Exact inverse by Gauss-Jordan elimination over Q. Throws SingularMatrixError.
RationalMatrix exact_inverse(const RationalMatrix& m);

/// r + s sqrt5 with rational r, s.
class GoldenNumber {
 public:
  GoldenNumber() = default;
  GoldenNumber(BigRational r, BigRational s = 0) : r_(std::move(r)), s_(std::move(s)) {}

  static GoldenNumber sqrt5() { return {0, 1}; }
  static GoldenNumber phi() { return {BigRational(1, 2), BigRational(1, 2)}; }
  /// (1 - sqrt5) / (1 + sqrt5)
  static GoldenNumber golden_q();

  const BigRational& rational_part() const noexcept { return r_; }
  const BigRational& sqrt5_part() const noexcept { return s_; }

  GoldenNumber conjugate() const { return {r_, -s_}; }
  /// x * conj(x) = r^2 - 5 s^2
  BigRational norm() const { return r_ * r_ - 5 * s_ * s_; }
  GoldenNumber pow(int k) const;

  friend GoldenNumber operator+(const GoldenNumber& a, const GoldenNumber& b) { return {a.r_ + b.r_, a.s_ + b.s_}; }
  friend GoldenNumber operator-(const GoldenNumber& a, const GoldenNumber& b) { return {a.r_ - b.r_, a.s_ - b.s_}; }
  friend GoldenNumber operator-(const GoldenNumber& a) { return {-a.r_, -a.s_}; }
  friend GoldenNumber operator*(const GoldenNumber& a, const GoldenNumber& b) {
    return {a.r_ * b.r_ + 5 * a.s_ * b.s_, a.r_ * b.s_ + a.s_ * b.r_};
  }
  friend GoldenNumber operator/(const GoldenNumber& a, const GoldenNumber& b);
  GoldenNumber& operator+=(const GoldenNumber& o) { return *this = *this + o; }
  GoldenNumber& operator-=(const GoldenNumber& o) { return *this = *this - o; }
  GoldenNumber& operator*=(const GoldenNumber& o) { return *this = *this * o; }
  GoldenNumber& operator/=(const GoldenNumber& o) { return *this = *this / o; }
  friend bool operator==(const GoldenNumber& a, const GoldenNumber& b) { return a.r_ == b.r_ && a.s_ == b.s_; }

  template <typename Scalar>
  Scalar to() const {
    using std::sqrt;
    return rational_to<Scalar>(r_) + rational_to<Scalar>(s_) * sqrt(Scalar(5));
  }

  template <typename Scalar>
  static Scalar rational_to(const BigRational& x) {
    if constexpr (std::is_floating_point_v<Scalar>) {
      return static_cast<Scalar>(boost::multiprecision::numerator(x).template convert_to<long double>() /
                                 boost::multiprecision::denominator(x).template convert_to<long double>());
    } else {
      return Scalar(boost::multiprecision::numerator(x)) / Scalar(boost::multiprecision::denominator(x));
    }
  }

 private:
  BigRational r_{0};
  BigRational s_{0};
};

template <typename Scalar>
Scalar to_scalar(const BigRational& x) {
  return GoldenNumber::rational_to<Scalar>(x);
}

/// Generalized Fibonacci F_{n+1} = a F_n + b F_{n-1} with F_0 = F_1 = 1.
template <typename Scalar>
Scalar gen_fib(Scalar a, Scalar b, int n) {
  if (n < 0) throw ParameterDomainError("gen_fib: n must be >= 0");
  Scalar prev(1), cur(1);
  for (int k = 1; k < n; ++k) {
    const Scalar next = a * cur + b * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// y_1 = 1, y_2 = 2 sinh(theta), y_{n+1} = 2 sinh(theta) y_n + y_{n-1}.
template <typename Scalar>
Scalar ismail_fib_recurrence(Scalar theta, int n) {
  using std::sinh;
  if (n < 1) throw ParameterDomainError("ismail_fib: n must be >= 1");
  const Scalar s = Scalar(2) * sinh(theta);
  Scalar prev(1), cur = s;
  if (n == 1) return prev;
  for (int k = 2; k < n; ++k) {
    const Scalar next = s * cur + prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// F_n(theta) = e^{(n-1) theta} (1 - Q^n) / (1 - Q), Q = -e^{-2 theta}.
template <typename Scalar>
Scalar ismail_fib_closed(Scalar theta, int n) {
  using std::exp;
  if (n < 1) throw ParameterDomainError("ismail_fib: n must be >= 1");
  const Scalar Q = -exp(Scalar(-2) * theta);
  return exp(Scalar(n - 1) * theta) * (Scalar(1) - ipow(Q, n)) / (Scalar(1) - Q);
}

/// Closed form, after checking it against the recurrence.
template <typename Scalar>
Scalar ismail_fib(Scalar theta, int n) {
  using std::abs;
  if (!(theta > Scalar(0))) throw ParameterDomainError("ismail_fib: theta must be > 0");
  const Scalar closed = ismail_fib_closed(theta, n);
  const Scalar rec = ismail_fib_recurrence(theta, n);
  if (abs(closed - rec) > Scalar(1e-9) * abs(closed)) {
    throw ConsistencyError("ismail_fib: recurrence and closed form disagree at n = " + std::to_string(n));
  }
  return closed;
}

/// theta_0 with sinh(theta_0) = 1/2, i.e. e^{theta_0} = phi.
template <typename Scalar>
Scalar theta0() {
  using std::asinh;
  return asinh(Scalar(1) / Scalar(2));
}

/// (-i)^n U_n(i sinh theta_0), in real arithmetic: U_n(iy) = i^n W_n(y) with
/// W_{n+1} = 2y W_n + W_{n-1}, and the unit phases are tracked as powers of i.
/// Equals fib(n) = F^cl_{n+1}.
template <typename Scalar>
Scalar fib_via_chebyshev(int n) {
  if (n < 0) throw ParameterDomainError("fib_via_chebyshev: n must be >= 0");
  const Scalar y = Scalar(1) / Scalar(2);
  Scalar prev(1), cur(1);  // W_0 = 1, W_1 = 2y
  cur = Scalar(2) * y;
  Scalar w = n == 0 ? prev : cur;
  for (int k = 1; k < n; ++k) {
    const Scalar next = Scalar(2) * y * cur + prev;
    prev = cur;
    cur = next;
    w = cur;
  }
  // phase of (-i)^n * i^n: i^{3n} * i^{n} = i^{4n}
  const int phase = static_cast<int>((3LL * n + n) % 4);
  if (phase % 2 != 0) throw ConsistencyError("fib_via_chebyshev: non-real phase");
  return phase == 0 ? w : -w;
}

template <typename Scalar>
struct NuMoments {
  Scalar truncated{};
  Scalar closed_form{};
  Scalar tail_bound{};  ///< analytic bound on the neglected atoms
  Scalar rounding{};    ///< floating error allowance for the K-term sum
};

/// n-th moment of nu = (1 - q^alpha) sum_k q^{alpha k} delta(x - q^k e^{-theta}),
/// truncated to K atoms and in closed form (1 - q^alpha) e^{-n theta} / (1 - q^{alpha+n}).
template <typename Scalar>
NuMoments<Scalar> nu_moments(int n, int alpha, Scalar theta, Scalar q, int K) {
  using std::abs;
  using std::exp;
  if (!(abs(q) < Scalar(1))) throw ParameterDomainError("nu_moments: require |q| < 1");
  if (K < 1) throw ParameterDomainError("nu_moments: require K >= 1");
  if (n < 0) throw ParameterDomainError("nu_moments: require n >= 0");
  const Scalar mass = Scalar(1) - ipow(q, alpha);
  const Scalar scale = exp(-Scalar(n) * theta);
  const Scalar step = ipow(q, alpha + n);
  NuMoments<Scalar> m;
  Scalar factor(1);
  for (int k = 0; k < K; ++k) {
    m.truncated += factor;
    factor *= step;
  }
  m.truncated *= mass * scale;
  m.closed_form = mass * scale / (Scalar(1) - step);
  m.tail_bound = abs(mass) * scale * abs(factor) / (Scalar(1) - abs(step));
  m.rounding = Scalar(4 * (K + 4)) * std::numeric_limits<Scalar>::epsilon() * abs(mass) * scale / (Scalar(1) - abs(step));
  return m;
}

/// Linear functional L(x^k) = mu_k over a floating carrier, with an optional
/// affine substitution L'(p) = L(p(alpha x + beta)).
template <typename Scalar>
class MomentFunctional {
 public:
  explicit MomentFunctional(std::vector<Scalar> moments) : moments_(std::move(moments)) {}

  const std::vector<Scalar>& moments() const noexcept { return moments_; }
  std::size_t size() const noexcept { return moments_.size(); }

  Scalar operator()(int k) const {
    if (k < 0 || k >= static_cast<int>(moments_.size())) {
      throw InsufficientMomentsError("moment functional: moment " + std::to_string(k) + " not available");
    }
    return moments_[k];
  }

  /// L(p) for p given by monomial coefficients (constant term first).
  Scalar apply(const std::vector<Scalar>& p) const {
    if (p.size() > moments_.size()) throw InsufficientMomentsError("moment functional: polynomial degree too high");
    Scalar sum(0);
    for (std::size_t i = 0; i < p.size(); ++i) sum += p[i] * moments_[i];
    return sum;
  }

  /// L(p1 p2) as the Hankel form sum_{i,j} p1_i p2_j mu_{i+j}.
  Scalar apply(const std::vector<Scalar>& p1, const std::vector<Scalar>& p2) const {
    if (p1.empty() || p2.empty()) return Scalar(0);
    if (p1.size() + p2.size() - 1 > moments_.size()) {
      throw InsufficientMomentsError("moment functional: need " + std::to_string(p1.size() + p2.size() - 1) +
                                     " moments, have " + std::to_string(moments_.size()));
    }
    Scalar sum(0);
    for (std::size_t i = 0; i < p1.size(); ++i) {
      for (std::size_t j = 0; j < p2.size(); ++j) sum += p1[i] * p2[j] * moments_[i + j];
    }
    return sum;
  }

  /// Moments of L(. (alpha x + beta)).
  MomentFunctional affine(Scalar alpha, Scalar beta) const {
    std::vector<Scalar> out(moments_.size(), Scalar(0));
    for (std::size_t k = 0; k < moments_.size(); ++k) {
      Scalar binom(1);
      for (std::size_t i = 0; i <= k; ++i) {
        out[k] += binom * ipow(alpha, static_cast<std::int64_t>(i)) * ipow(beta, static_cast<std::int64_t>(k - i)) *
                  moments_[i];
        binom = binom * Scalar(k - i) / Scalar(i + 1);
      }
    }
    return MomentFunctional(std::move(out));
  }

 private:
  std::vector<Scalar> moments_;
};

/// L(p1 p2).
template <typename Scalar>
Scalar functional_apply(const MomentFunctional<Scalar>& L, const std::vector<Scalar>& p1, const std::vector<Scalar>& p2) {
  return L.apply(p1, p2);
}

template <typename Scalar>
MomentFunctional<Scalar> berg_functional(int count, FibConvention convention = FibConvention::Classical) {
  std::vector<Scalar> m;
  m.reserve(count);
  for (int k = 0; k < count; ++k) m.push_back(to_scalar<Scalar>(berg_moment(k, convention)));
  return MomentFunctional<Scalar>(std::move(m));
}

/// Monomial coefficients of p_n(x; a, b | q), constant term first.
template <typename Scalar>
std::vector<Scalar> little_q_jacobi_coefficients(int n, Scalar a, Scalar b, Scalar q) {
  std::vector<Scalar> c(n + 1);
  Scalar term(1), qj(1);
  const Scalar q_minus_n = ipow(q, -n), ab_q_n1 = a * b * ipow(q, n + 1);
  c[0] = term;
  for (int j = 0; j < n; ++j) {
    const Scalar denom = (Scalar(1) - a * q * qj) * (Scalar(1) - q * qj);
    if (denom == Scalar(0)) throw DegenerateParameterError("little q-Jacobi: (aq;q)_j vanishes");
    term *= (Scalar(1) - q_minus_n * qj) * (Scalar(1) - ab_q_n1 * qj) / denom * q;
    c[j + 1] = term;
    qj *= q;
  }
  return c;
}

template <typename Scalar>
struct AffineCalibration {
  Scalar alpha{};
  Scalar beta{};
};

/// Solves L(p1(alpha x + beta)) = L(p2(alpha x + beta)) = 0 for the affine map,
/// taking alpha > 0. p1, p2 are the degree-1 and degree-2 members.
template <typename Scalar>
AffineCalibration<Scalar> calibrate_affine(const MomentFunctional<Scalar>& L, const std::vector<Scalar>& p1,
                                           const std::vector<Scalar>& p2) {
  using std::sqrt;
  if (p1.size() != 2 || p2.size() != 3) throw ParameterDomainError("calibrate_affine: need degree 1 and 2 polynomials");
  const Scalar mu0 = L(0), mu1 = L(1), mu2 = L(2);
  // target moments of the substituted functional
  const Scalar m1 = -p1[0] * mu0 / p1[1];
  const Scalar m2 = -(p2[0] * mu0 + p2[1] * m1) / p2[2];
  const Scalar alpha_sq = (m2 - m1 * m1 / mu0) / (mu2 - mu1 * mu1 / mu0);
  if (!(alpha_sq > Scalar(0))) {
    throw ConsistencyError("calibrate_affine: no real affine map orthogonalizes p1 and p2");
  }
  const Scalar alpha = sqrt(alpha_sq);
  return {alpha, (m1 - alpha * mu1) / mu0};
}

template <typename Scalar>
struct BergReport {
  AffineCalibration<Scalar> calibration;
  std::vector<std::vector<Scalar>> gram;  ///< L(p_m p_n) after calibration
  Scalar max_normalized_offdiag{};        ///< max |G_mn| / sqrt(G_mm G_nn), m < n
  Scalar min_diagonal{};
  FibConvention convention = FibConvention::Classical;
};

/// Gram matrix of the golden little q-Jacobi polynomials p_0..p_{n_max}
/// under the reciprocal Fibonacci moments, after affine calibration.
template <typename Scalar>
BergReport<Scalar> berg_orthogonality(int n_max, FibConvention convention = FibConvention::Classical) {
  using std::abs;
  using std::sqrt;
  if (n_max < 2) throw ParameterDomainError("berg_orthogonality: n_max must be >= 2");
  const Scalar s5 = sqrt(Scalar(5));
  const Scalar q = (Scalar(1) - s5) / (Scalar(1) + s5);
  const MomentFunctional<Scalar> L = berg_functional<Scalar>(2 * n_max + 1, convention);

  std::vector<std::vector<Scalar>> polys;
  for (int n = 0; n <= n_max; ++n) polys.push_back(little_q_jacobi_coefficients(n, q, Scalar(1), q));

  BergReport<Scalar> rep;
  rep.convention = convention;
  rep.calibration = calibrate_affine(L, polys[1], polys[2]);
  const auto Lc = L.affine(rep.calibration.alpha, rep.calibration.beta);

  rep.gram.assign(n_max + 1, std::vector<Scalar>(n_max + 1));
  for (int m = 0; m <= n_max; ++m) {
    for (int n = 0; n <= n_max; ++n) rep.gram[m][n] = Lc.apply(polys[m], polys[n]);
  }
  rep.min_diagonal = rep.gram[0][0];
  for (int m = 0; m <= n_max; ++m) {
    if (rep.gram[m][m] < rep.min_diagonal) rep.min_diagonal = rep.gram[m][m];
    for (int n = m + 1; n <= n_max; ++n) {
      const Scalar denom = sqrt(abs(rep.gram[m][m] * rep.gram[n][n]));
      const Scalar v = abs(rep.gram[m][n]) / denom;
      if (v > rep.max_normalized_offdiag) rep.max_normalized_offdiag = v;
    }
  }
  return rep;
}

}  // namespace defosc
