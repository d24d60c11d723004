#include "defosc/oscillator.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "defosc/registry.hpp"

using namespace defosc;

TEST(Operators, DimensionChecks) {
  const auto seq = harmonic<double>();
  EXPECT_THROW(build_operators(seq, 2), DimensionError);
  EXPECT_THROW(verify_algebra(seq, 3, 1e-10), DimensionError);
}

TEST(Operators, HarmonicMatrices) {
  const auto ops = build_operators(harmonic<double>(), 6);
  for (int n = 0; n < 5; ++n) {
    EXPECT_NEAR(ops.raise(n + 1, n), std::sqrt(n + 1.0), 1e-15);
    EXPECT_NEAR(ops.X(n + 1, n), std::sqrt((n + 1) / 2.0), 1e-15);
    EXPECT_NEAR(ops.P(n, n + 1), std::sqrt((n + 1) / 2.0), 1e-15);
    EXPECT_NEAR(ops.P(n + 1, n), -std::sqrt((n + 1) / 2.0), 1e-15);
  }
  EXPECT_TRUE(ops.P.imaginary());
  // H = a+a- + a-a+ = 2N + 1 on the interior
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(ops.hamiltonian(n, n), 2.0 * n + 1.0, 1e-14);
}

TEST(Operators, RaiseIsTransposeOfLower) {
  for (const auto& f : registered_families()) {
    const auto ops = build_operators(make_family<double>(f.name), 12);
    EXPECT_EQ(ops.raise.coefficients(), ops.lower.transpose().coefficients()) << f.name;
    EXPECT_EQ(ops.raise.coefficients(), ops.lower.coefficients().transpose()) << f.name;
  }
}

TEST(Operators, XandPHermitian) {
  const auto ops = build_operators(fibonacci_golden<double>(), 10);
  const auto x = ops.X.to_dense();
  const auto p = ops.P.to_dense();
  EXPECT_LT((x - x.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((p - p.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Algebra, AllRegisteredFamiliesPass) {
  for (const auto& f : registered_families()) {
    const auto report = verify_algebra(make_family<double>(f.name), 64, 1e-10);
    EXPECT_TRUE(report.all_passed()) << f.name;
    EXPECT_EQ(report.relations.size(), 7u);
    for (const auto& r : report.relations) EXPECT_LT(r.interior_residual, 1e-10) << f.name << " " << r.name;
  }
}

TEST(Algebra, ExtraFamiliesPass) {
  for (const auto& seq : {laguerre<double>(3.0), little_q_jacobi_family(QParams<double>{0.5, 0.3, 0.7}),
                          little_q_jacobi_family(QParams<double>{-0.6, -0.6, 0.5}), ismail_theta<double>(1.3, 4)}) {
    EXPECT_TRUE(verify_algebra(seq, 40, 1e-10).all_passed()) << seq.name();
  }
}

TEST(Algebra, TruncationShowsAtBoundary) {
  // [a-, a+] deviates in the last row, which is why it is excluded
  const auto report = verify_algebra(harmonic<double>(), 10, 1e-10);
  EXPECT_GT(report.relations[0].boundary_residual, 1.0);
}

TEST(Algebra, BrokenSequenceIsDetected) {
  // a sequence whose "H" is compared against wrong eigenvalues would not be caught by
  // the commutators alone; check that a perturbed raise fails the first relation
  const auto seq = harmonic<double>();
  auto ops = build_operators(seq, 10);
  ops.raise.coeffRef(3, 2) *= 1.01;
  const auto residual = commutator(ops.lower, ops.raise) - 2.0 * (ops.structure_shifted - ops.structure);
  EXPECT_GT(residual.split_max_abs(8).first, 1e-3);
}

TEST(Algebra, GaugeInvariance) {
  // flipping signs of basis vectors changes matrices but not the relations
  const auto seq = fibonacci_golden<double>();
  const int dim = 16;
  const auto ops = build_operators(seq, dim);
  BandMatrix<double>::Vector s(dim);
  for (int n = 0; n < dim; ++n) s(n) = (n % 3 == 1) ? -1.0 : 1.0;
  const auto up = gauge_transform(ops.raise, s);
  const auto dn = gauge_transform(ops.lower, s);
  const auto residual = commutator(dn, up) - 2.0 * (ops.structure_shifted - ops.structure);
  EXPECT_LT(residual.split_max_abs(dim - 2).first, 1e-14);
  EXPECT_LT((gauge_transform(ops.hamiltonian, s) - ops.hamiltonian).split_max_abs(dim).first, 1e-15);
}

TEST(Algebra, HamiltonianEigenvalues) {
  const auto seq = fibonacci_golden<double>();
  const auto lambda = hamiltonian_eigenvalues(seq, 4);
  const double b0 = 0.46708617948135784823, b1 = 0.13211192196391398721;
  EXPECT_NEAR(lambda(0), 2 * b0 * b0, 1e-15);
  EXPECT_NEAR(lambda(1), 2 * (b0 * b0 + b1 * b1), 1e-15);
  const auto spectrum = interior_spectrum(build_operators(seq, 12).hamiltonian);
  auto expected = hamiltonian_eigenvalues(seq, 10);
  std::sort(expected.data(), expected.data() + expected.size());
  EXPECT_LT((spectrum - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Algebra, HamiltonianDiscrepancy) {
  // X^2 + P^2 = H for symmetric sequences; a_n != 0 leaves a residue
  EXPECT_LT(verify_algebra(harmonic<double>(), 20, 1e-10).hamiltonian_discrepancy, 1e-13);
  EXPECT_LT(verify_algebra(chebyshev_u<double>(), 20, 1e-10).hamiltonian_discrepancy, 1e-15);
  EXPECT_GT(verify_algebra(fibonacci_golden<double>(), 20, 1e-10).hamiltonian_discrepancy, 0.1);
}

TEST(Algebra, ExtendedPrecision) {
  const auto report = verify_algebra(fibonacci_golden<long double>(), 64, 1e-14L);
  EXPECT_TRUE(report.all_passed());
}
