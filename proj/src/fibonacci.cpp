#include "defosc/fibonacci.hpp"

#include <utility>

namespace defosc {

BigInt fib(int n) {
  if (n < 0) throw ParameterDomainError("fib: n must be >= 0");
  BigInt prev = 1, cur = 1;
  for (int k = 1; k < n; ++k) {
    BigInt next = cur + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

namespace {

// (F^cl_k, F^cl_{k+1})
std::pair<BigInt, BigInt> doubling(int k) {
  if (k == 0) return {0, 1};
  const auto [a, b] = doubling(k / 2);
  BigInt c = a * (2 * b - a);
  BigInt d = a * a + b * b;
  if (k % 2 == 0) return {std::move(c), std::move(d)};
  BigInt e = c + d;
  return {std::move(d), std::move(e)};
}

}  // namespace

BigInt fib_doubling(int n) {
  if (n < 0) throw ParameterDomainError("fib_doubling: n must be >= 0");
  return doubling(n + 1).first;
}

BigInt classical_fib(int k) {
  if (k < 0) throw ParameterDomainError("classical_fib: k must be >= 0");
  return k == 0 ? BigInt(0) : fib(k - 1);
}

BigRational berg_moment(int n, FibConvention convention) {
  if (n < 0) throw ParameterDomainError("berg_moment: n must be >= 0");
  const BigInt f = convention == FibConvention::Classical ? classical_fib(n + 2) : fib(n + 2);
  return BigRational(BigInt(1), f);
}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RationalMatrix::is_integer() const {
  for (const auto& x : data_) {
    if (boost::multiprecision::denominator(x) != 1) return false;
  }
  return true;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.size() != b.size()) throw DimensionError("RationalMatrix: size mismatch");
  const int n = a.size();
  RationalMatrix c(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (a(i, k) == 0) continue;
      for (int j = 0; j < n; ++j) c(i, j) += a(i, k) * b(k, j);
    }
  }
  return c;
}

RationalMatrix filbert_matrix(int n, int shift) {
  if (n < 1) throw ParameterDomainError("filbert_matrix: n must be >= 1");
  if (shift < -1) throw ParameterDomainError("filbert_matrix: shift must be >= -1");
  RationalMatrix m(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) m(i - 1, j - 1) = BigRational(BigInt(1), classical_fib(i + j + shift));
  }
  return m;
}

RationalMatrix exact_inverse(const RationalMatrix& m) {
  const int n = m.size();
  RationalMatrix work = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (work(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw SingularMatrixError("exact_inverse: matrix is singular");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const BigRational p = work(col, col);
    for (int j = 0; j < n; ++j) {
      work(col, j) /= p;
      inv(col, j) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || work(r, col) == 0) continue;
      const BigRational f = work(r, col);
      for (int j = 0; j < n; ++j) {
        work(r, j) -= f * work(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

GoldenNumber GoldenNumber::golden_q() { return GoldenNumber(1, -1) / GoldenNumber(1, 1); }

GoldenNumber GoldenNumber::pow(int k) const {
  if (k < 0) return GoldenNumber(1) / pow(-k);
  GoldenNumber result(1), base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

GoldenNumber operator/(const GoldenNumber& a, const GoldenNumber& b) {
  const BigRational nb = b.norm();
  if (nb == 0) throw SingularMatrixError("GoldenNumber: division by zero");
  const GoldenNumber num = a * b.conjugate();
  return {num.r_ / nb, num.s_ / nb};
}

}  // namespace defosc
