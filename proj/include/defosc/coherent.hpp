#pragma once

// Barut-Girardello coherent states a-|z> = z|z> of a generalized oscillator:
//
//   |z> = N(|z|^2)^{-1/2} sum_n z^n / (sqrt2 b_{n-1})! psi_n,
//   N(r2) = sum_n r2^n / (2 b_{n-1}^2)!,
//
// where (sqrt2 b_{n-1})! = prod_{k<n} sqrt2 b_k and (2 b_{n-1}^2)! is its square.

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "defosc/errors.hpp"
#include "defosc/oscillator.hpp"
#include "defosc/qseries.hpp"
#include "defosc/recurrence.hpp"

namespace defosc {

template <typename Scalar>
struct SeriesOptions {
  Scalar tolerance = Scalar(1e-14);  ///< relative tail bound
  int max_terms = 10000;
};

template <typename Scalar>
Scalar generalized_factorial(const CoefficientSequence<Scalar>& seq, int n) {
  using std::sqrt;
  const Scalar root2 = sqrt(Scalar(2));
  Scalar result(1);
  for (int k = 0; k < n; ++k) {
    const Scalar bk = seq.b(k);
    if (bk == Scalar(0)) {
      throw ZeroCoefficientError("generalized factorial: b_" + std::to_string(k) + " = 0; state undefined beyond level " +
                                 std::to_string(k));
    }
    result *= root2 * bk;
  }
  return result;
}

template <typename Scalar>
struct NormalizationSeries {
  Scalar value{};
  std::vector<Scalar> terms;  ///< t_n = r2^n / (2 b_{n-1}^2)!, summed
  Scalar tail{};              ///< estimated remainder beyond the last term
};

/// Sums N(r2) until the geometric tail estimate is below tol * N.
/// Throws DivergenceError when the term ratio r2 / (2 b_n^2) exceeds one and
/// keeps growing over three checkpoints, on overflow, or on max_terms exhaustion.
template <typename Scalar>
NormalizationSeries<Scalar> normalization_series(const CoefficientSequence<Scalar>& seq, Scalar r2,
                                                 const SeriesOptions<Scalar>& opts = {}) {
  using std::isfinite;
  if (r2 < Scalar(0)) throw ParameterDomainError("normalization: |z|^2 must be >= 0");
  constexpr int kCheckpoint = 8;

  NormalizationSeries<Scalar> out;
  Scalar term(1), sum(0);
  Scalar last_checkpoint_ratio(0);
  int growing = 0;
  for (int n = 0; n < opts.max_terms; ++n) {
    out.terms.push_back(term);
    sum += term;
    if (term == Scalar(0)) {
      out.value = sum;
      out.tail = Scalar(0);
      return out;
    }
    const Scalar bn = seq.b(n);
    if (bn == Scalar(0)) {  // finite-dimensional ladder: the series stops here
      out.value = sum;
      out.tail = Scalar(0);
      return out;
    }
    const Scalar ratio = r2 / (Scalar(2) * bn * bn);
    const Scalar next = term * ratio;
    if (!isfinite(static_cast<double>(next)) || !isfinite(static_cast<double>(sum))) {
      throw DivergenceError("normalization series overflows at n = " + std::to_string(n + 1));
    }
    if (ratio < Scalar(1)) {
      const Scalar tail = next / (Scalar(1) - ratio);
      // the ratio must also be non-increasing for the geometric bound to hold
      const Scalar ratio_next = r2 / (Scalar(2) * seq.b(n + 1) * seq.b(n + 1));
      if (ratio_next <= ratio && tail < opts.tolerance * sum) {
        out.value = sum;
        out.tail = tail;
        return out;
      }
    }
    if ((n + 1) % kCheckpoint == 0) {
      if (ratio > Scalar(1) && ratio >= last_checkpoint_ratio) {
        if (++growing >= 3) {
          throw DivergenceError("normalization series diverges: term ratio r2/(2 b_n^2) = " +
                                std::to_string(static_cast<double>(ratio)) + " at n = " + std::to_string(n) +
                                " and growing");
        }
      } else {
        growing = 0;
      }
      last_checkpoint_ratio = ratio;
    }
    term = next;
  }
  throw DivergenceError("normalization series did not converge within " + std::to_string(opts.max_terms) + " terms");
}

template <typename Scalar>
Scalar normalization(const CoefficientSequence<Scalar>& seq, Scalar r2, const SeriesOptions<Scalar>& opts = {}) {
  return normalization_series(seq, r2, opts).value;
}

/// Independent route: sum_{n<terms} r2^n / gf(n)^2 with explicit powers and factorials.
template <typename Scalar>
Scalar normalization_by_factorials(const CoefficientSequence<Scalar>& seq, Scalar r2, int terms) {
  using std::pow;
  Scalar sum(0);
  for (int n = 0; n < terms; ++n) {
    const Scalar gf = generalized_factorial(seq, n);
    sum += pow(r2, n) / (gf * gf);
  }
  return sum;
}

/// The golden-family normalization through the basic hypergeometric route.
template <typename Scalar>
HyperSeriesResult<Scalar> golden_normalization_qseries(Scalar r2, Scalar tolerance = Scalar(1e-14)) {
  auto spec = golden_normalization_spec(golden_q<Scalar>(), r2);
  spec.tail_tolerance = tolerance;
  return basic_hypergeometric(spec);
}

/// Coefficient of psi_n in the closed-form golden expansion
/// q^{-n(n+3)/2} (q^3;q)_{2n} / (q;q)_n^2 (z/sqrt2)^n p_n, with p_n = sign gamma psi_n.
template <typename Scalar>
std::complex<Scalar> golden_closed_form_coefficient(int n, std::complex<Scalar> z) {
  using std::sqrt;
  const auto params = golden_params<Scalar>();
  const Scalar q = params.q;
  const auto conn = orthonormalize(params, n);
  const Scalar qpow = ipow(q, -(n * (n + 3)) / 2);  // n(n+3) is even
  const Scalar qq = q_pochhammer(q, q, n);
  const Scalar weight = qpow * q_pochhammer(q * q * q, q, 2 * n) / (qq * qq) * Scalar(conn.sign) * conn.gamma;
  return weight * std::pow(z / sqrt(Scalar(2)), n);
}

template <typename Scalar>
struct CoherentState {
  using Vector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
  std::complex<Scalar> z;
  int dim = 0;
  Vector coeffs;          ///< unit 2-norm on the truncation
  Scalar norm_constant{};  ///< N(|z|^2) from the full series
  Scalar tail_bound{};     ///< sum_{n >= dim} |c_n|^2 relative to N
};

template <typename Scalar>
CoherentState<Scalar> make_state(const CoefficientSequence<Scalar>& seq, std::complex<Scalar> z, int dim,
                                 Scalar tol = Scalar(1e-14)) {
  using std::norm;
  using std::sqrt;
  if (dim < 1) throw DimensionError("make_state: dim must be >= 1");
  CoherentState<Scalar> st;
  st.z = z;
  st.dim = dim;
  st.coeffs = CoherentState<Scalar>::Vector::Zero(dim);
  st.coeffs(0) = 1;
  if (z == std::complex<Scalar>(0)) {
    st.norm_constant = 1;
    st.tail_bound = 0;
    return st;
  }

  const Scalar r2 = norm(z);
  SeriesOptions<Scalar> opts;
  opts.tolerance = tol * Scalar(1e-3);
  const auto series = normalization_series(seq, r2, opts);
  st.norm_constant = series.value;

  // tail(d) = (sum_{n>=d} t_n + remainder) / N
  const int available = static_cast<int>(series.terms.size());
  std::vector<Scalar> tail(available + 1, Scalar(0));
  tail[available] = series.tail;
  for (int n = available - 1; n >= 0; --n) tail[n] = tail[n + 1] + series.terms[n];
  for (auto& t : tail) t /= series.value;

  st.tail_bound = dim >= available ? tail[available] : tail[dim];
  if (st.tail_bound > tol) {
    int suggested = -1;
    for (int d = 1; d <= available; ++d) {
      if (tail[d] <= tol) {
        suggested = d;
        break;
      }
    }
    throw InsufficientTruncationError("coherent state: tail " + std::to_string(static_cast<double>(st.tail_bound)) +
                                          " exceeds tolerance at dim " + std::to_string(dim),
                                      suggested);
  }

  const Scalar root2 = sqrt(Scalar(2));
  for (int n = 1; n < dim; ++n) st.coeffs(n) = st.coeffs(n - 1) * z / (root2 * seq.b(n - 1));
  st.coeffs /= st.coeffs.norm();
  return st;
}

/// Smallest dim with |c_dim|^2 / sum_{n<=dim} |c_n|^2 < threshold.
template <typename Scalar>
int auto_dimension(const CoefficientSequence<Scalar>& seq, std::complex<Scalar> z, Scalar threshold = Scalar(1e-16),
                   int max_dim = 4096) {
  using std::norm;
  const Scalar r2 = norm(z);
  Scalar term(1), sum(1);
  for (int d = 1; d <= max_dim; ++d) {
    const Scalar b = seq.b(d - 1);
    if (b == Scalar(0)) return d;
    term *= r2 / (Scalar(2) * b * b);
    sum += term;
    if (term / sum < threshold) return std::max(d, 3);
  }
  throw InsufficientTruncationError("auto_dimension: no dimension up to " + std::to_string(max_dim) + " suffices", -1);
}

/// || a- v - z v || over the first dim-1 coordinates.
template <typename Scalar>
Scalar eigen_residual(const CoherentState<Scalar>& st, const CoefficientSequence<Scalar>& seq) {
  using std::norm;
  using std::sqrt;
  const Scalar root2 = sqrt(Scalar(2));
  Scalar acc(0);
  for (int n = 0; n + 1 < st.dim; ++n) acc += norm(root2 * seq.b(n) * st.coeffs(n + 1) - st.z * st.coeffs(n));
  return sqrt(acc);
}

/// Same, including the last coordinate where truncation cuts a- v.
template <typename Scalar>
Scalar full_eigen_residual(const CoherentState<Scalar>& st, const CoefficientSequence<Scalar>& seq) {
  using std::norm;
  using std::sqrt;
  const Scalar partial = eigen_residual(st, seq);
  return sqrt(partial * partial + norm(st.z * st.coeffs(st.dim - 1)));
}

template <typename Scalar>
struct Uncertainty {
  Scalar dX{};
  Scalar dP{};
  Scalar bound{};  ///< |<[X, P]>| / 2
  Scalar product() const { return dX * dP; }
  Scalar gap() const { return dX * dP - bound; }
};

template <typename Scalar>
Uncertainty<Scalar> uncertainty(const CoherentState<Scalar>& st, const CoefficientSequence<Scalar>& seq) {
  using std::abs;
  using std::sqrt;
  using std::max;
  if (st.dim < 3) throw DimensionError("uncertainty: dim must be >= 3");
  const auto ops = build_operators(seq, st.dim);
  const auto X = ops.X.to_dense();
  const auto P = ops.P.to_dense();
  const auto& v = st.coeffs;

  auto expect = [&](const auto& M) { return v.dot(M * v); };  // v^H M v
  const Scalar ex = expect(X).real(), ep = expect(P).real();
  const Scalar ex2 = expect(X * X).real(), ep2 = expect(P * P).real();

  Uncertainty<Scalar> u;
  u.dX = sqrt(max(Scalar(0), ex2 - ex * ex));
  u.dP = sqrt(max(Scalar(0), ep2 - ep * ep));
  u.bound = abs(expect(X * P - P * X)) / Scalar(2);
  return u;
}

}  // namespace defosc
