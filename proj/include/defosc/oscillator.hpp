#pragma once

// Truncated matrix representations of the generalized oscillator built from a
// coefficient sequence, and checks of the generalized Heisenberg relations
//
//   [a-, a+] = 2 (B(N+I) - B(N)),   [N, a+-] = +-a+-,
//   H psi_n = lambda_n psi_n,       C = 2 B(N) - a+ a- = 0.
//
// Matrices act on coordinates (c_0, ..., c_{dim-1}) of sum c_n psi_n, so
// column n holds the image of psi_n.

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "defosc/band_matrix.hpp"
#include "defosc/recurrence.hpp"

namespace defosc {

template <typename Scalar>
struct OperatorSet {
  BandMatrix<Scalar> X;
  BandMatrix<Scalar> P;          ///< stored as i * (antisymmetric real part)
  BandMatrix<Scalar> raise;      ///< a+, strictly lower: sqrt2 b_n at (n+1, n)
  BandMatrix<Scalar> lower;      ///< a-, strictly upper: sqrt2 b_{n-1} at (n-1, n)
  BandMatrix<Scalar> number;     ///< N = diag(0, 1, ..., dim-1)
  BandMatrix<Scalar> structure;  ///< B(N) = diag(b_{-1}^2, b_0^2, ...)
  BandMatrix<Scalar> structure_shifted;  ///< B(N+I) = diag(b_0^2, b_1^2, ...)
  BandMatrix<Scalar> hamiltonian;        ///< a+ a- + a- a+
};

/// lambda_0 = 2 b_0^2, lambda_n = 2 (b_{n-1}^2 + b_n^2).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> hamiltonian_eigenvalues(const CoefficientSequence<Scalar>& seq, int count) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> lambda(count);
  for (int n = 0; n < count; ++n) {
    const Scalar bp = seq.b(n - 1), bn = seq.b(n);
    lambda(n) = Scalar(2) * (bp * bp + bn * bn);
  }
  return lambda;
}

template <typename Scalar>
OperatorSet<Scalar> build_operators(const CoefficientSequence<Scalar>& seq, int dim) {
  using std::sqrt;
  using Vector = typename BandMatrix<Scalar>::Vector;
  if (dim < 3) throw DimensionError("build_operators: dim must be >= 3, got " + std::to_string(dim));

  const Vector a = seq.a_vector(dim);
  const Vector b = seq.b_vector(dim - 1);  // b_0 .. b_{dim-2} fit in the truncation
  const Scalar root2 = sqrt(Scalar(2));

  BandMatrix<Scalar> X(dim, 1, 1, OperatorKind::X);
  X.set_diagonal(0, a);
  X.set_diagonal(-1, b);
  X.set_diagonal(1, b);

  // P psi_n = i(-b_n psi_{n+1} + b_{n-1} psi_{n-1}); the diagonal of the
  // entrywise Im part is dropped so that P stays Hermitian when a_n != 0.
  BandMatrix<Scalar> P(dim, 1, 1, OperatorKind::P, true);
  P.set_diagonal(-1, -b);
  P.set_diagonal(1, b);

  BandMatrix<Scalar> raise(dim, 1, 0, OperatorKind::Raise);
  raise.set_diagonal(-1, root2 * b);
  BandMatrix<Scalar> lower(dim, 0, 1, OperatorKind::Lower);
  lower.set_diagonal(1, root2 * b);

  Vector n_diag(dim), b_prev_sq(dim), b_sq(dim);
  for (int n = 0; n < dim; ++n) {
    n_diag(n) = Scalar(n);
    const Scalar bp = seq.b(n - 1), bn = seq.b(n);
    b_prev_sq(n) = bp * bp;
    b_sq(n) = bn * bn;
  }

  auto H = raise * lower + lower * raise;
  H.set_kind(OperatorKind::Hamiltonian);

  return {std::move(X),
          std::move(P),
          std::move(raise),
          std::move(lower),
          BandMatrix<Scalar>::diagonal_matrix(n_diag, OperatorKind::Number),
          BandMatrix<Scalar>::diagonal_matrix(b_prev_sq, OperatorKind::Structure),
          BandMatrix<Scalar>::diagonal_matrix(b_sq, OperatorKind::Structure),
          std::move(H)};
}

template <typename Scalar>
struct RelationCheck {
  std::string name;
  Scalar interior_residual{};
  Scalar boundary_residual{};
  bool passed = false;
};

template <typename Scalar>
struct AlgebraReport {
  std::string family;
  int dim = 0;
  Scalar tolerance{};
  std::vector<RelationCheck<Scalar>> relations;
  /// max interior |X^2 + P^2 - H|; zero for symmetric families, reported only.
  Scalar hamiltonian_discrepancy{};

  bool all_passed() const {
    return std::all_of(relations.begin(), relations.end(), [](const auto& r) { return r.passed; });
  }
};

/// Checks the relations on rows and columns < dim - 2; the last two basis
/// vectors are cut by the truncation and reported separately.
template <typename Scalar>
AlgebraReport<Scalar> verify_algebra(const CoefficientSequence<Scalar>& seq, int dim, Scalar tol) {
  if (dim < 4) throw DimensionError("verify_algebra: dim must be >= 4, got " + std::to_string(dim));
  const auto ops = build_operators(seq, dim);
  const int interior = dim - 2;

  AlgebraReport<Scalar> report;
  report.family = seq.name();
  report.dim = dim;
  report.tolerance = tol;

  auto record = [&](std::string name, const BandMatrix<Scalar>& residual, Scalar scale = Scalar(1)) {
    auto [inner, outer] = residual.split_max_abs(interior);
    inner /= scale;
    outer /= scale;
    report.relations.push_back({std::move(name), inner, outer, inner < tol});
  };

  record("lowering_raising_commutator",
         commutator(ops.lower, ops.raise) - Scalar(2) * (ops.structure_shifted - ops.structure));
  record("number_raising_commutator", commutator(ops.number, ops.raise) - ops.raise);
  record("number_lowering_commutator", commutator(ops.number, ops.lower) + ops.lower);
  record("hamiltonian_spectrum",
         ops.hamiltonian - BandMatrix<Scalar>::diagonal_matrix(hamiltonian_eigenvalues(seq, dim)));

  const auto center = Scalar(2) * ops.structure - ops.raise * ops.lower;
  record("center_vanishes", center);
  // second-order checks: relative to the ladder entries they multiply
  using std::max;
  const Scalar ladder = max(Scalar(1), ops.raise.split_max_abs(dim).first);
  record("center_commutes_raising", commutator(center, ops.raise), ladder);
  record("center_commutes_lowering", commutator(center, ops.lower), ladder);

  const auto x2p2 = ops.X * ops.X + ops.P * ops.P;
  report.hamiltonian_discrepancy = (x2p2 - ops.hamiltonian).split_max_abs(interior).first;
  return report;
}

/// Eigenvalues of the leading (dim-2) block of H, ascending.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> interior_spectrum(const BandMatrix<Scalar>& hamiltonian) {
  const int m = hamiltonian.dim() - 2;
  const typename BandMatrix<Scalar>::Dense block = hamiltonian.coefficients().topLeftCorner(m, m);
  Eigen::SelfAdjointEigenSolver<typename BandMatrix<Scalar>::Dense> solver(block, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace defosc
