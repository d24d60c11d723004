#include "defosc/io.hpp"

#include <sstream>

#include <gtest/gtest.h>

using namespace defosc;

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(io::format_number(0.1), "0.1");
  EXPECT_EQ(io::format_number(1.0), "1");
  EXPECT_EQ(io::format_number(-2.5e-20), "-2.5e-20");
  EXPECT_EQ(std::stod(io::format_number(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(io::format_number(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Rational, Strings) {
  EXPECT_EQ(io::to_string(BigRational(6, 4)), "3/2");
  EXPECT_EQ(io::to_string(BigRational(-4, 2)), "-2");
  const auto j = io::to_json(exact_inverse(filbert_matrix(2)));
  // inverse of [[1, 1], [1, 1/2]] is [[-1, 2], [2, -2]]
  EXPECT_EQ(j[0][0]["num"], "-1");
  EXPECT_EQ(j[0][1]["num"], "2");
  EXPECT_EQ(j[1][1]["den"], "1");
}

TEST(BandMatrixJson, DenseBelowLimit) {
  const auto ops = build_operators(harmonic<double>(), 5);
  const auto j = io::to_json(ops.raise);
  EXPECT_EQ(j["kind"], "a+");
  EXPECT_EQ(j["lower_bandwidth"], 1);
  EXPECT_EQ(j["upper_bandwidth"], 0);
  EXPECT_EQ(j["diagonals"]["-1"].size(), 4u);
  EXPECT_DOUBLE_EQ(j["dense"][2][1].get<double>(), std::sqrt(2.0));
  EXPECT_TRUE(io::to_json(ops.P)["imaginary_unit"].get<bool>());
}

TEST(BandMatrixJson, BandedOnlyAboveLimit) {
  const auto ops = build_operators(harmonic<double>(), io::kDenseJsonLimit + 1);
  EXPECT_FALSE(io::to_json(ops.X).contains("dense"));
  EXPECT_TRUE(io::to_json(build_operators(harmonic<double>(), io::kDenseJsonLimit).X).contains("dense"));
}

TEST(BandMatrixCsv, HeaderAndEntries) {
  const auto ops = build_operators(chebyshev_u<double>(), 3);
  std::ostringstream os;
  io::write_csv(os, ops.P);
  EXPECT_EQ(os.str(), "row,col,value,unit\n0,1,0.5,i\n1,0,-0.5,i\n1,2,0.5,i\n2,1,-0.5,i\n");
}

TEST(ReportJson, AlgebraAndClassification) {
  const auto r = verify_algebra(harmonic<double>(), 8, 1e-10);
  const auto j = io::to_json(r);
  EXPECT_EQ(j["relations"].size(), 7u);
  EXPECT_TRUE(j["all_passed"].get<bool>());
  const auto c = io::to_json(classify(chebyshev_t<double>()), "chebyshev-t");
  EXPECT_EQ(c["verdict"], "Infinite");
  EXPECT_TRUE(c["dim"].is_null());
  EXPECT_EQ(c["witness_j"], 0);
}

TEST(DifferenceCsv, Header) {
  std::ostringstream os;
  io::write_csv(os, difference_table(harmonic<double>(), 4, 1));
  EXPECT_EQ(os.str().substr(0, 10), "j,n,value\n");
  EXPECT_NE(os.str().find("\n0,0,0.5"), std::string::npos);
}

TEST(StateJson, Fields) {
  const auto seq = harmonic<double>();
  const auto st = make_state(seq, std::complex<double>(0.2, 0.1), 16);
  const auto j = io::to_json(st, eigen_residual(st, seq));
  EXPECT_EQ(j["coeffs"].size(), 16u);
  EXPECT_EQ(j["z"][1], 0.1);
  EXPECT_EQ(j.dump(), io::to_json(st, eigen_residual(st, seq)).dump());
}
