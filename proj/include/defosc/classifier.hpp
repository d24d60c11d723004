#pragma once

// Dimension of the generalized oscillator algebra. The algebra is
// four-dimensional iff b_n^2 = (beta0 + beta2 n)(1 + n) for all n, and
// infinite-dimensional otherwise. Verdicts hold up to the tested n_max.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "defosc/recurrence.hpp"

namespace defosc {

/// Iterated forward differences of b_n^2:
/// A^(0)_n = b_n^2 - b_{n-1}^2 (b_{-1} = 0), A^(j)_n = A^(j-1)_{n+1} - A^(j-1)_n.
template <typename Scalar>
struct DifferenceTable {
  int n_max = 0;
  int j_max = 0;
  std::vector<std::vector<Scalar>> rows;  ///< rows[j] has n_max - j + 1 entries

  const std::vector<Scalar>& row(int j) const { return rows.at(j); }
};

template <typename Scalar>
DifferenceTable<Scalar> difference_table(const CoefficientSequence<Scalar>& seq, int n_max, int j_max) {
  if (j_max < 0 || n_max < j_max + 2) throw DimensionError("difference_table: require n_max >= j_max + 2");
  DifferenceTable<Scalar> t;
  t.n_max = n_max;
  t.j_max = j_max;
  std::vector<Scalar> first(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const Scalar bn = seq.b(n), bp = seq.b(n - 1);
    first[n] = bn * bn - bp * bp;
  }
  t.rows.push_back(std::move(first));
  for (int j = 1; j <= j_max; ++j) {
    const auto& prev = t.rows.back();
    std::vector<Scalar> next(prev.size() - 1);
    for (std::size_t n = 0; n + 1 < prev.size(); ++n) next[n] = prev[n + 1] - prev[n];
    t.rows.push_back(std::move(next));
  }
  return t;
}

template <typename Scalar>
struct BetaFit {
  Scalar beta0{};
  Scalar beta2{};
};

/// beta0 = b_0^2, beta2 = b_1^2 / 2 - beta0 (the n = 0, 1 equations).
template <typename Scalar>
BetaFit<Scalar> fit_beta(const CoefficientSequence<Scalar>& seq) {
  const Scalar b0 = seq.b(0), b1 = seq.b(1);
  return {b0 * b0, b1 * b1 / Scalar(2) - b0 * b0};
}

enum class Verdict { Finite, Infinite, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Finite: return "Finite";
    case Verdict::Infinite: return "Infinite";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

template <typename Scalar>
struct ClassificationResult {
  Verdict verdict = Verdict::Inconclusive;
  Scalar beta0{};
  Scalar beta2{};
  int dim = 0;                       ///< 4 when Finite, 0 otherwise
  std::optional<int> witness_j;      ///< smallest non-constant difference row (Infinite)
  int first_failure_n = -1;          ///< first n violating the factored form
  Scalar max_relative_residual{};    ///< max_n |b_n^2 - (beta0 + beta2 n)(1 + n)| / max(1, b_n^2)
  Scalar max_row_variation{};        ///< spread of the witness row (or of the last tested row)
  int n_max = 0;
  Scalar tolerance{};
};

/// Relative width of the band in which a residual counts as numeric noise
/// straddling the tolerance rather than a clear violation.
inline constexpr double kInconclusiveBand = 10.0;

template <typename Scalar>
ClassificationResult<Scalar> classify(const CoefficientSequence<Scalar>& seq, int n_max = 64,
                                      Scalar tol = Scalar(1e-9), int j_max = 8) {
  using std::abs;
  using std::max;
  if (n_max < 8) throw DimensionError("classify: n_max must be >= 8");

  ClassificationResult<Scalar> r;
  r.n_max = n_max;
  r.tolerance = tol;
  const auto fit = fit_beta(seq);
  r.beta0 = fit.beta0;
  r.beta2 = fit.beta2;

  for (int n = 0; n <= n_max; ++n) {
    const Scalar bn = seq.b(n);
    const Scalar b2 = bn * bn;
    const Scalar model = (fit.beta0 + fit.beta2 * Scalar(n)) * Scalar(1 + n);
    const Scalar rel = abs(b2 - model) / max(Scalar(1), b2);
    if (rel > tol && r.first_failure_n < 0) r.first_failure_n = n;
    r.max_relative_residual = max(r.max_relative_residual, rel);
  }

  if (r.max_relative_residual <= tol) {
    r.verdict = Verdict::Finite;
    r.dim = 4;
    return r;
  }

  const int rows = std::min(j_max, n_max - 2);
  const auto table = difference_table(seq, n_max, rows);
  for (int j = 0; j <= rows; ++j) {
    const auto& row = table.row(j);
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    Scalar scale(1);
    for (const auto& v : row) scale = max(scale, abs(v));
    const Scalar spread = (*hi - *lo) / scale;
    r.max_row_variation = spread;
    if (spread > tol) {
      r.witness_j = j;
      break;
    }
  }
  r.verdict = r.max_relative_residual <= Scalar(kInconclusiveBand) * tol ? Verdict::Inconclusive : Verdict::Infinite;
  return r;
}

}  // namespace defosc
