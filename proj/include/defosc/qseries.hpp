#pragma once

// q-Pochhammer symbols, basic hypergeometric series and the terminating
// little q-Jacobi sum. All routines are templated on the real scalar so the
// same code runs in double, long double or a boost::multiprecision float.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "defosc/errors.hpp"

namespace defosc {

/// x^k for any integer k (negative k inverts).
template <typename Scalar>
Scalar ipow(Scalar x, std::int64_t k) {
  if (k < 0) return Scalar(1) / ipow(x, -k);
  Scalar result(1);
  Scalar base = x;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

/// (a;q)_n = (1-a)(1-aq)...(1-aq^{n-1}); 1 for n = 0.
template <typename Scalar>
Scalar q_pochhammer(Scalar a, Scalar q, int n) {
  Scalar result(1);
  Scalar factor = a;
  for (int k = 0; k < n; ++k) {
    result *= Scalar(1) - factor;
    factor *= q;
  }
  return result;
}

/// (a;q)_infinity, truncated once |a q^k| drops below tol. Requires |q| < 1.
template <typename Scalar>
Scalar q_pochhammer_infinite(Scalar a, Scalar q, Scalar tol = Scalar(1e-18), int max_factors = 100000) {
  using std::abs;
  if (!(abs(q) < Scalar(1))) {
    throw ParameterDomainError("infinite q-Pochhammer symbol requires |q| < 1");
  }
  Scalar result(1);
  Scalar factor = a;
  for (int k = 0; k < max_factors; ++k) {
    result *= Scalar(1) - factor;
    if (abs(factor) < tol) return result;
    factor *= q;
  }
  throw DivergenceError("infinite q-Pochhammer product did not settle");
}

/// (a_1,...,a_m;q)_n, the product of the individual symbols.
template <typename Scalar>
Scalar multi_pochhammer(std::span<const Scalar> as, Scalar q, int n) {
  Scalar result(1);
  for (const Scalar& a : as) result *= q_pochhammer(a, q, n);
  return result;
}

/// Little q-Jacobi polynomial p_n(x; a, b | q) = 2phi1(q^{-n}, abq^{n+1}; aq; q, qx),
/// normalized so that p_n(0) = 1.
template <typename Scalar>
Scalar little_q_jacobi(int n, Scalar x, Scalar a, Scalar b, Scalar q) {
  using std::abs;
  Scalar sum(1);
  Scalar term(1);
  const Scalar q_minus_n = ipow(q, -n);
  const Scalar ab_q_n1 = a * b * ipow(q, n + 1);
  Scalar qj(1);  // q^j
  for (int j = 0; j < n; ++j) {
    const Scalar denom = (Scalar(1) - a * q * qj) * (Scalar(1) - q * qj);
    if (denom == Scalar(0)) {
      throw DegenerateParameterError("little q-Jacobi: (aq;q)_j vanishes at j = " + std::to_string(j + 1));
    }
    term *= (Scalar(1) - q_minus_n * qj) * (Scalar(1) - ab_q_n1 * qj) / denom * q * x;
    sum += term;
    qj *= q;
  }
  return sum;
}

/// A Pochhammer parameter (value; q^base_power)_k. base_power > 1 lets
/// pairs such as (c;q)_k(-c;q)_k = (c^2;q^2)_k stay in real arithmetic.
template <typename Scalar>
struct QParam {
  Scalar value;
  int base_power = 1;
};

/// How the k-th term is weighted beyond the Pochhammer ratio.
enum class SeriesConvention {
  /// r phi s: ((-1)^k q^{C(k,2)})^{1+s-r} z^k / (q;q)_k.
  Standard,
  /// (-1)^{k*alternating} q^{quadratic*C(k,2) + linear*k} z^k / (q;q)_k.
  Custom,
  /// Literal transcription of the 6phi1 display that accompanies the
  /// Fibonacci normalization: (-1)^{2k} q^{-2k C(k,2)}, no z^k and no (q;q)_k.
  /// Kept only for comparison; it is not a meaningful series.
  AsPrinted,
};

template <typename Scalar>
struct HyperSeriesSpec {
  std::vector<QParam<Scalar>> numerators;
  std::vector<QParam<Scalar>> denominators;
  Scalar q{};
  Scalar z{};
  int max_terms = 10000;
  Scalar tail_tolerance = Scalar(1e-14);
  SeriesConvention convention = SeriesConvention::Standard;
  int quadratic_exponent = 0;  // Custom only
  int linear_exponent = 0;     // Custom only
  bool alternating = false;    // Custom only
};

template <typename Scalar>
struct HyperSeriesResult {
  Scalar value{};
  int terms_used = 0;
  Scalar tail_estimate{};
  bool exhausted = false;
};

namespace detail {

// Ratio t_{k+1}/t_k of the series described by spec.
template <typename Scalar>
Scalar hyper_term_ratio(const HyperSeriesSpec<Scalar>& spec, int k) {
  Scalar ratio(1);
  for (const auto& p : spec.numerators) ratio *= Scalar(1) - p.value * ipow(spec.q, std::int64_t(p.base_power) * k);
  for (const auto& p : spec.denominators) {
    const Scalar d = Scalar(1) - p.value * ipow(spec.q, std::int64_t(p.base_power) * k);
    if (d == Scalar(0)) throw DegenerateParameterError("basic hypergeometric series: denominator factor vanishes");
    ratio /= d;
  }
  const int r = static_cast<int>(spec.numerators.size());
  const int s = static_cast<int>(spec.denominators.size());
  switch (spec.convention) {
    case SeriesConvention::Standard: {
      const int e = 1 + s - r;
      ratio *= spec.z / (Scalar(1) - ipow(spec.q, k + 1)) * ipow(spec.q, std::int64_t(e) * k);
      if (e % 2 != 0) ratio = -ratio;
      break;
    }
    case SeriesConvention::Custom:
      ratio *= spec.z / (Scalar(1) - ipow(spec.q, k + 1)) *
               ipow(spec.q, std::int64_t(spec.quadratic_exponent) * k + spec.linear_exponent);
      if (spec.alternating) ratio = -ratio;
      break;
    case SeriesConvention::AsPrinted:
      // exponent -k^2(k-1) steps by -(3k^2+k)
      ratio *= ipow(spec.q, -(3 * std::int64_t(k) * k + k));
      break;
  }
  return ratio;
}

}  // namespace detail

/// First `count` terms t_0, t_1, ... of the series.
template <typename Scalar>
std::vector<Scalar> basic_hypergeometric_terms(const HyperSeriesSpec<Scalar>& spec, int count) {
  std::vector<Scalar> terms;
  terms.reserve(count);
  Scalar t(1);
  for (int k = 0; k < count; ++k) {
    terms.push_back(t);
    t *= detail::hyper_term_ratio(spec, k);
  }
  return terms;
}

/// Sums the series until the geometric tail estimate falls below
/// spec.tail_tolerance (absolute). Throws DivergenceError when the term ratio
/// exceeds one and keeps growing over three consecutive checkpoints.
template <typename Scalar>
HyperSeriesResult<Scalar> basic_hypergeometric(const HyperSeriesSpec<Scalar>& spec) {
  using std::abs;
  using std::isfinite;
  constexpr int kCheckpoint = 8;

  HyperSeriesResult<Scalar> out;
  Scalar sum(0);
  Scalar term(1);
  Scalar last_checkpoint_ratio(0);
  int growing_checkpoints = 0;

  for (int k = 0; k < spec.max_terms; ++k) {
    sum += term;
    out.terms_used = k + 1;
    if (term == Scalar(0)) {  // terminating series
      out.value = sum;
      out.tail_estimate = Scalar(0);
      return out;
    }
    const Scalar ratio = detail::hyper_term_ratio(spec, k);
    const Scalar next = term * ratio;
    if (!isfinite(static_cast<double>(next))) throw DivergenceError("basic hypergeometric series: term overflow");

    const Scalar rho = abs(ratio);
    if (next == Scalar(0)) {
      out.value = sum;
      out.tail_estimate = Scalar(0);
      return out;
    }
    if (rho < Scalar(1)) {
      const Scalar tail = abs(next) / (Scalar(1) - rho);
      if (tail < spec.tail_tolerance && k >= 1) {
        out.value = sum + next;
        out.terms_used = k + 2;
        out.tail_estimate = abs(next) * rho / (Scalar(1) - rho);
        return out;
      }
    }
    if ((k + 1) % kCheckpoint == 0) {
      if (rho > Scalar(1) && rho >= last_checkpoint_ratio) {
        if (++growing_checkpoints >= 3) {
          throw DivergenceError("basic hypergeometric series diverges (term ratio " +
                                std::to_string(static_cast<double>(rho)) + " and growing)");
        }
      } else {
        growing_checkpoints = 0;
      }
      last_checkpoint_ratio = rho;
    }
    term = next;
  }
  out.value = sum;
  out.exhausted = true;
  out.tail_estimate = std::numeric_limits<Scalar>::infinity();
  return out;
}

/// The 6phi1-type series for the Barut-Girardello normalization of the
/// golden little q-Jacobi oscillator (a = q, b = 1), written with real
/// parameters: the half-integer pairs (q^{3/2};q)(-q^{3/2};q) collapse to
/// (q^3;q^2), and the k-th term carries q^{-k(k+1)} (r2/2)^k.
template <typename Scalar>
HyperSeriesSpec<Scalar> golden_normalization_spec(Scalar q, Scalar r2) {
  HyperSeriesSpec<Scalar> spec;
  spec.numerators = {{-q, 1}, {-q * q, 1}, {q * q * q, 2}, {q * q * q, 2}};
  spec.denominators = {{q * q, 1}};
  spec.q = q;
  spec.z = r2 / Scalar(2);
  spec.convention = SeriesConvention::Custom;
  spec.quadratic_exponent = -2;
  spec.linear_exponent = -2;
  return spec;
}

}  // namespace defosc
