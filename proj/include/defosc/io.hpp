#pragma once

// JSON and CSV export of matrices, reports and states. Output is a pure
// function of its input: numbers use the shortest round-trip decimal form.

#include <complex>
#include <ostream>
#include <string>

#include <json.hpp>

#include "defosc/band_matrix.hpp"
#include "defosc/classifier.hpp"
#include "defosc/coherent.hpp"
#include "defosc/fibonacci.hpp"
#include "defosc/oscillator.hpp"

namespace defosc::io {

inline constexpr int kSchemaVersion = 1;
/// Matrices larger than this are written banded only.
inline constexpr int kDenseJsonLimit = 64;

/// Shortest decimal string that round-trips the double.
std::string format_number(double x);

std::string to_string(const BigRational& x);

nlohmann::json to_json(const RationalMatrix& m);

template <typename Scalar>
double d(const Scalar& x) {
  return static_cast<double>(x);
}

template <typename Scalar>
nlohmann::json to_json(const BandMatrix<Scalar>& m) {
  nlohmann::json diagonals = nlohmann::json::object();
  for (int k = -m.lower_bandwidth(); k <= m.upper_bandwidth(); ++k) {
    const auto v = m.diagonal(k);
    nlohmann::json arr = nlohmann::json::array();
    for (int t = 0; t < v.size(); ++t) arr.push_back(d(v(t)));
    diagonals[std::to_string(k)] = std::move(arr);
  }
  nlohmann::json j = {{"schema_version", kSchemaVersion},
                      {"kind", to_string(m.kind())},
                      {"dim", m.dim()},
                      {"imaginary_unit", m.imaginary()},
                      {"lower_bandwidth", m.lower_bandwidth()},
                      {"upper_bandwidth", m.upper_bandwidth()},
                      {"diagonals", std::move(diagonals)}};
  if (m.dim() <= kDenseJsonLimit) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.dim(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int jj = 0; jj < m.dim(); ++jj) row.push_back(d(m(i, jj)));
      rows.push_back(std::move(row));
    }
    j["dense"] = std::move(rows);
  }
  return j;
}

/// Nonzero entries as row,col,value,unit; unit is "i" for imaginary matrices.
template <typename Scalar>
void write_csv(std::ostream& os, const BandMatrix<Scalar>& m) {
  os << "row,col,value,unit\n";
  const char* unit = m.imaginary() ? "i" : "1";
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = 0; j < m.dim(); ++j) {
      const Scalar v = m(i, j);
      if (v != Scalar(0)) os << i << ',' << j << ',' << format_number(d(v)) << ',' << unit << '\n';
    }
  }
}

template <typename Scalar>
nlohmann::json to_json(const AlgebraReport<Scalar>& r) {
  nlohmann::json rel = nlohmann::json::array();
  for (const auto& c : r.relations) {
    rel.push_back({{"name", c.name},
                   {"interior_residual", d(c.interior_residual)},
                   {"boundary_residual", d(c.boundary_residual)},
                   {"passed", c.passed}});
  }
  return {{"schema_version", kSchemaVersion},
          {"family", r.family},
          {"dim", r.dim},
          {"tolerance", d(r.tolerance)},
          {"relations", std::move(rel)},
          {"hamiltonian_discrepancy", d(r.hamiltonian_discrepancy)},
          {"all_passed", r.all_passed()}};
}

template <typename Scalar>
nlohmann::json to_json(const ClassificationResult<Scalar>& r, const std::string& family) {
  nlohmann::json j = {{"schema_version", kSchemaVersion},
                      {"family", family},
                      {"verdict", to_string(r.verdict)},
                      {"n_max", r.n_max},
                      {"tolerance", d(r.tolerance)},
                      {"beta0", d(r.beta0)},
                      {"beta2", d(r.beta2)},
                      {"max_relative_residual", d(r.max_relative_residual)},
                      {"first_failure_n", r.first_failure_n},
                      {"max_row_variation", d(r.max_row_variation)}};
  j["dim"] = r.verdict == Verdict::Finite ? nlohmann::json(r.dim) : nlohmann::json(nullptr);
  j["witness_j"] = r.witness_j ? nlohmann::json(*r.witness_j) : nlohmann::json(nullptr);
  return j;
}

template <typename Scalar>
void write_csv(std::ostream& os, const DifferenceTable<Scalar>& t) {
  os << "j,n,value\n";
  for (int j = 0; j <= t.j_max; ++j) {
    const auto& row = t.row(j);
    for (std::size_t n = 0; n < row.size(); ++n) os << j << ',' << n << ',' << format_number(d(row[n])) << '\n';
  }
}

template <typename Scalar>
nlohmann::json to_json(const CoherentState<Scalar>& st, Scalar residual) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (int n = 0; n < st.dim; ++n) coeffs.push_back({d(st.coeffs(n).real()), d(st.coeffs(n).imag())});
  return {{"schema_version", kSchemaVersion},
          {"z", {d(st.z.real()), d(st.z.imag())}},
          {"dim", st.dim},
          {"coeffs", std::move(coeffs)},
          {"norm_constant", d(st.norm_constant)},
          {"tail_bound", d(st.tail_bound)},
          {"residual", d(residual)}};
}

}  // namespace defosc::io
