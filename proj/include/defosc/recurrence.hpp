#pragma once

// Recurrence coefficients of orthonormal polynomial families,
//
//   x psi_n(x) = b_n psi_{n+1}(x) + a_n psi_n(x) + b_{n-1} psi_{n-1}(x),
//
// with b_{-1} = 0 and b_n >= 0 for every built-in family.

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "defosc/errors.hpp"
#include "defosc/qseries.hpp"

namespace defosc {

enum class Family {
  Harmonic,
  ChebyshevT,
  ChebyshevU,
  Laguerre,
  LittleQJacobi,
  FibonacciGolden,
  IsmailTheta,
  Custom,
};

/// q = (1 - sqrt 5)/(1 + sqrt 5) = -1/phi^2.
template <typename Scalar>
Scalar golden_q() {
  using std::sqrt;
  const Scalar s5 = sqrt(Scalar(5));
  return (Scalar(1) - s5) / (Scalar(1) + s5);
}

template <typename Scalar>
struct QParams {
  Scalar q{};
  Scalar a{};
  Scalar b{};

  void validate() const {
    using std::abs;
    if (!(abs(q) > Scalar(0) && abs(q) < Scalar(1))) {
      throw ParameterDomainError("little q-Jacobi: require 0 < |q| < 1");
    }
  }
};

template <typename Scalar>
struct MonicCoefficients {
  Scalar A{};
  Scalar C{};
};

/// A_n, C_n of  -x p_n = A_n p_{n+1} - (A_n + C_n) p_n + C_n p_{n-1}  for the
/// little q-Jacobi polynomials normalized by p_n(0) = 1.
template <typename Scalar>
MonicCoefficients<Scalar> little_q_jacobi_monic_coeffs(const QParams<Scalar>& p, int n) {
  p.validate();
  const Scalar& q = p.q;
  const Scalar ab = p.a * p.b;
  const Scalar qn = ipow(q, n);
  const Scalar d0 = Scalar(1) - ab * ipow(q, 2 * n);
  const Scalar d1 = Scalar(1) - ab * ipow(q, 2 * n + 1);
  const Scalar d2 = Scalar(1) - ab * ipow(q, 2 * n + 2);
  if (d0 == Scalar(0) || d1 == Scalar(0) || d2 == Scalar(0)) {
    throw DegenerateParameterError("little q-Jacobi: vanishing 1 - ab q^k denominator at n = " + std::to_string(n));
  }
  MonicCoefficients<Scalar> c;
  c.A = qn * (Scalar(1) - p.a * qn * q) * (Scalar(1) - ab * qn * q) / (d1 * d2);
  c.C = n == 0 ? Scalar(0) : p.a * qn * (Scalar(1) - qn) * (Scalar(1) - p.b * qn) / (d0 * d1);
  return c;
}

template <typename Scalar>
struct OrthonormalData {
  Scalar a{};         ///< a_n = A_n + C_n
  Scalar b_prev{};    ///< b_{n-1} = sqrt(A_{n-1} C_n), 0 for n = 0
  Scalar gamma{};     ///< |p_n| / |psi_n| = sqrt(C_1...C_n / (A_0...A_{n-1}))
  int sign = 1;       ///< p_n = sign * gamma * psi_n in the positive gauge
};

template <typename Scalar>
OrthonormalData<Scalar> orthonormalize(const QParams<Scalar>& p, int n) {
  using std::sqrt;
  OrthonormalData<Scalar> out;
  const auto cur = little_q_jacobi_monic_coeffs(p, n);
  out.a = cur.A + cur.C;
  Scalar gamma_sq(1);
  for (int k = 1; k <= n; ++k) {
    const auto prev = little_q_jacobi_monic_coeffs(p, k - 1);
    const Scalar ck = little_q_jacobi_monic_coeffs(p, k).C;
    const Scalar product = prev.A * ck;
    if (!(product > Scalar(0))) {
      throw NonPositiveDefiniteError("little q-Jacobi: A_{n-1} C_n <= 0 at n = " + std::to_string(k));
    }
    gamma_sq *= ck / prev.A;
    // x psi_n = b_n psi_{n+1} + ... forces sign_{n} = -sgn(A_{n-1}) sign_{n-1}
    out.sign = prev.A > Scalar(0) ? -out.sign : out.sign;
    if (k == n) out.b_prev = sqrt(product);
  }
  out.gamma = sqrt(gamma_sq);
  return out;
}

/// gamma_n^2 written with q-Pochhammer symbols:
/// a^n q^n (1-abq)/(1-abq^{2n+1}) (q,bq;q)_n / (aq,abq;q)_n.
template <typename Scalar>
Scalar little_q_jacobi_gamma_closed_form(const QParams<Scalar>& p, int n) {
  using std::sqrt;
  const Scalar& q = p.q;
  const Scalar ab = p.a * p.b;
  const Scalar sq = ipow(p.a * q, n) * (Scalar(1) - ab * q) / (Scalar(1) - ab * ipow(q, 2 * n + 1)) *
                    q_pochhammer(q, q, n) * q_pochhammer(p.b * q, q, n) /
                    (q_pochhammer(p.a * q, q, n) * q_pochhammer(ab * q, q, n));
  return sqrt(sq);
}

/// p_n(x) from the monic recurrence, p_{-1} = 0, p_0 = 1.
template <typename Scalar>
Scalar little_q_jacobi_by_recurrence(const QParams<Scalar>& p, int n, Scalar x) {
  Scalar prev(0), cur(1);
  for (int k = 0; k < n; ++k) {
    const auto c = little_q_jacobi_monic_coeffs(p, k);
    const Scalar next = ((c.A + c.C - x) * cur - c.C * prev) / c.A;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Orthonormal recurrence coefficients (a_n, b_n) of one polynomial family.
/// Immutable after construction; coefficient values are memoized and the
/// cache is shared between copies.
template <typename Scalar>
class CoefficientSequence {
 public:
  using Generator = std::function<std::pair<Scalar, Scalar>(int)>;

  CoefficientSequence(Family family, std::string name, std::map<std::string, double> params, bool symmetric,
                      Generator generator)
      : family_(family),
        name_(std::move(name)),
        params_(std::move(params)),
        symmetric_(symmetric),
        cache_(std::make_shared<Cache>(std::move(generator))) {}

  Family family() const noexcept { return family_; }
  const std::string& name() const noexcept { return name_; }
  const std::map<std::string, double>& params() const noexcept { return params_; }
  bool symmetric() const noexcept { return symmetric_; }

  /// (a_n, b_n); b(-1) is 0 by convention.
  std::pair<Scalar, Scalar> coefficients(int n) const {
    if (n < 0) return {Scalar(0), Scalar(0)};
    return cache_->get(n);
  }
  Scalar a(int n) const { return coefficients(n).first; }
  Scalar b(int n) const { return coefficients(n).second; }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> a_vector(int count) const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(count);
    for (int n = 0; n < count; ++n) v(n) = a(n);
    return v;
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b_vector(int count) const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(count);
    for (int n = 0; n < count; ++n) v(n) = b(n);
    return v;
  }

 private:
  class Cache {
   public:
    explicit Cache(Generator g) : generator_(std::move(g)) {}

    std::pair<Scalar, Scalar> get(int n) {
      {
        std::shared_lock lock(mutex_);
        if (n < static_cast<int>(values_.size())) return values_[n];
      }
      std::unique_lock lock(mutex_);
      while (static_cast<int>(values_.size()) <= n) {
        values_.push_back(generator_(static_cast<int>(values_.size())));
      }
      return values_[n];
    }

   private:
    Generator generator_;
    std::shared_mutex mutex_;
    std::vector<std::pair<Scalar, Scalar>> values_;
  };

  Family family_;
  std::string name_;
  std::map<std::string, double> params_;
  bool symmetric_;
  std::shared_ptr<Cache> cache_;
};

template <typename Scalar>
std::pair<Scalar, Scalar> coefficients(const CoefficientSequence<Scalar>& seq, int n) {
  return seq.coefficients(n);
}

/// b_n^2 = (n+1)/2; the Hermite functions.
template <typename Scalar>
CoefficientSequence<Scalar> harmonic() {
  return {Family::Harmonic, "harmonic", {}, true, [](int n) {
            using std::sqrt;
            return std::pair{Scalar(0), sqrt(Scalar(n + 1) / Scalar(2))};
          }};
}

template <typename Scalar>
CoefficientSequence<Scalar> chebyshev_t() {
  return {Family::ChebyshevT, "chebyshev-t", {}, true, [](int n) {
            using std::sqrt;
            return std::pair{Scalar(0), n == 0 ? Scalar(1) / sqrt(Scalar(2)) : Scalar(1) / Scalar(2)};
          }};
}

/// Orthonormal U_n coincide with U_n themselves: b_n = 1/2.
template <typename Scalar>
CoefficientSequence<Scalar> chebyshev_u() {
  return {Family::ChebyshevU, "chebyshev-u", {}, true,
          [](int) { return std::pair{Scalar(0), Scalar(1) / Scalar(2)}; }};
}

template <typename Scalar>
CoefficientSequence<Scalar> laguerre(double alpha) {
  if (!(alpha > -1.0)) throw ParameterDomainError("laguerre: require alpha > -1");
  return {Family::Laguerre, "laguerre", {{"alpha", alpha}}, false, [alpha](int n) {
            using std::sqrt;
            const Scalar al(alpha);
            return std::pair{Scalar(2 * n + 1) + al, sqrt(Scalar(n + 1) * (Scalar(n + 1) + al))};
          }};
}

namespace detail {

template <typename Scalar>
std::pair<Scalar, Scalar> little_q_jacobi_pair(const QParams<Scalar>& p, int n) {
  using std::sqrt;
  const auto cur = little_q_jacobi_monic_coeffs(p, n);
  const auto next = little_q_jacobi_monic_coeffs(p, n + 1);
  const Scalar product = cur.A * next.C;
  if (!(product > Scalar(0))) {
    throw NonPositiveDefiniteError("little q-Jacobi: A_n C_{n+1} <= 0 at n = " + std::to_string(n) +
                                   "; no real oscillator at these parameters");
  }
  return {cur.A + cur.C, sqrt(product)};
}

}  // namespace detail

/// Orthonormalized little q-Jacobi: a_n = A_n + C_n, b_n = sqrt(A_n C_{n+1}).
template <typename Scalar>
CoefficientSequence<Scalar> little_q_jacobi_family(const QParams<Scalar>& p, std::string name = "little-q-jacobi") {
  p.validate();
  // fail early on parameters that are degenerate or indefinite at the bottom of the ladder
  detail::little_q_jacobi_pair(p, 0);
  return {Family::LittleQJacobi, std::move(name),
          {{"q", static_cast<double>(p.q)}, {"a", static_cast<double>(p.a)}, {"b", static_cast<double>(p.b)}},
          false, [p](int n) { return detail::little_q_jacobi_pair(p, n); }};
}

/// The Fibonacci oscillator: a = q, b = 1, q = (1 - sqrt 5)/(1 + sqrt 5).
template <typename Scalar>
QParams<Scalar> golden_params() {
  const Scalar q = golden_q<Scalar>();
  return {q, q, Scalar(1)};
}

template <typename Scalar>
CoefficientSequence<Scalar> fibonacci_golden() {
  auto seq = little_q_jacobi_family(golden_params<Scalar>(), "fibonacci-golden");
  return {Family::FibonacciGolden, "fibonacci-golden", seq.params(), false,
          [seq](int n) { return seq.coefficients(n); }};
}

/// Polynomials orthogonal for nu = (1-q^alpha) sum q^{alpha k} delta(x - q^k e^{-theta})
/// with q = -e^{-2 theta}: little q-Jacobi p_n(x e^theta; q^{alpha-1}, 1 | q).
/// The Jacobi matrix in x is e^{-theta} times the one in x e^theta.
/// Only even alpha gives a positive measure.
template <typename Scalar>
CoefficientSequence<Scalar> ismail_theta(double theta, int alpha) {
  using std::exp;
  if (!(theta > 0.0)) throw ParameterDomainError("ismail-theta: require theta > 0");
  if (alpha < 1) throw ParameterDomainError("ismail-theta: require integer alpha >= 1");
  if (alpha % 2 != 0) {
    throw NonPositiveDefiniteError("ismail-theta: odd alpha gives a signed measure; no real oscillator");
  }
  const Scalar q = -exp(Scalar(-2) * Scalar(theta));
  const QParams<Scalar> p{q, ipow(q, alpha - 1), Scalar(1)};
  auto base = little_q_jacobi_family(p);
  const Scalar scale = exp(-Scalar(theta));
  return {Family::IsmailTheta, "ismail-theta", {{"theta", theta}, {"alpha", double(alpha)}}, false,
          [base, scale](int n) {
            const auto [an, bn] = base.coefficients(n);
            return std::pair{scale * an, scale * bn};
          }};
}

/// Arbitrary user-supplied coefficients; no sign constraint is imposed.
template <typename Scalar>
CoefficientSequence<Scalar> custom_sequence(std::string name, typename CoefficientSequence<Scalar>::Generator g,
                                            bool symmetric) {
  return {Family::Custom, std::move(name), {}, symmetric, std::move(g)};
}

/// Orthonormal psi_n(x) by forward recurrence, psi_{-1} = 0, psi_0 = 1.
template <typename Scalar>
Scalar evaluate_polynomial(const CoefficientSequence<Scalar>& seq, int n, Scalar x) {
  Scalar prev(0), cur(1);
  for (int k = 0; k < n; ++k) {
    const auto [ak, bk] = seq.coefficients(k);
    if (bk == Scalar(0)) throw ZeroCoefficientError("evaluate_polynomial: b_" + std::to_string(k) + " = 0");
    const Scalar next = ((x - ak) * cur - seq.b(k - 1) * prev) / bk;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace defosc
