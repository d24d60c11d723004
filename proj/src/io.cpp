#include "defosc/io.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace defosc::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string to_string(const BigRational& x) {
  const auto num = boost::multiprecision::numerator(x);
  const auto den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

nlohmann::json to_json(const RationalMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.size(); ++j) {
      row.push_back({{"num", boost::multiprecision::numerator(m(i, j)).str()},
                     {"den", boost::multiprecision::denominator(m(i, j)).str()}});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace defosc::io
