#include "defosc/registry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace defosc {

const std::vector<FamilySpec>& registered_families() {
  static const std::vector<FamilySpec> families = {
      {"harmonic", "Hermite functions, b_n^2 = (n+1)/2", true, {}},
      {"chebyshev-t", "orthonormal Chebyshev polynomials of the first kind, b_0 = 1/sqrt 2, b_n = 1/2", true, {}},
      {"chebyshev-u", "Chebyshev polynomials of the second kind, b_n = 1/2", true, {}},
      {"laguerre",
       "orthonormal Laguerre polynomials, a_n = 2n+alpha+1, b_n = sqrt((n+1)(n+alpha+1))",
       false,
       {{"alpha", "number", 0.5, -1.0, std::nullopt, "weight x^alpha e^{-x}"}}},
      {"little-q-jacobi",
       "orthonormalized little q-Jacobi polynomials p_n(x; a, b | q)",
       false,
       {{"q", "q-expression", -0.3819660112501051, -1.0, 1.0, "deformation, 0 < |q| < 1; \"golden\" accepted"},
        {"a", "q-expression", -0.3819660112501051, std::nullopt, std::nullopt, "number, \"q\" or \"q^k\""},
        {"b", "q-expression", 1.0, std::nullopt, std::nullopt, "number, \"q\" or \"q^k\""}}},
      {"fibonacci-golden", "little q-Jacobi at a = q, b = 1, q = (1-sqrt 5)/(1+sqrt 5)", false, {}},
      {"ismail-theta",
       "polynomials of the discrete measure nu with q = -exp(-2 theta)",
       false,
       {{"theta", "number", 0.48121182505960347, 0.0, std::nullopt, "theta > 0; default sinh(theta) = 1/2"},
        {"alpha", "integer", 2.0, 0.0, std::nullopt, "even positive integer"}}},
  };
  return families;
}

const FamilySpec* find_family(const std::string& name) {
  const auto& all = registered_families();
  auto it = std::find_if(all.begin(), all.end(), [&](const FamilySpec& f) { return f.name == name; });
  return it == all.end() ? nullptr : &*it;
}

nlohmann::json to_json(const FamilySpec& spec) {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : spec.parameters) {
    nlohmann::json j = {{"name", p.name}, {"type", p.type}, {"default", p.default_value}, {"description", p.description}};
    if (p.exclusive_min) j["exclusive_min"] = *p.exclusive_min;
    if (p.exclusive_max) j["exclusive_max"] = *p.exclusive_max;
    params.push_back(std::move(j));
  }
  return {{"name", spec.name}, {"description", spec.description}, {"symmetric", spec.symmetric}, {"parameters", params}};
}

namespace {

template <typename Scalar>
Scalar parse_number(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return Scalar(v.get<double>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    try {
      std::size_t used = 0;
      const long double x = std::stold(s, &used);
      if (used == s.size()) return Scalar(x);
    } catch (const std::exception&) {
    }
  }
  throw ParameterDomainError("parameter '" + key + "': expected a number, got " + v.dump());
}

template <typename Scalar>
Scalar parse_q(const nlohmann::json& v) {
  if (v.is_string() && v.get<std::string>() == "golden") return golden_q<Scalar>();
  return parse_number<Scalar>(v, "q");
}

// number, "q", "q^k"
template <typename Scalar>
Scalar parse_q_expression(const nlohmann::json& v, const std::string& key, Scalar q) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "q") return q;
    if (s.size() > 2 && s.rfind("q^", 0) == 0) {
      try {
        std::size_t used = 0;
        const int k = std::stoi(s.substr(2), &used);
        if (used == s.size() - 2) return ipow(q, k);
      } catch (const std::exception&) {
      }
      throw ParameterDomainError("parameter '" + key + "': malformed q-power '" + s + "'");
    }
  }
  return parse_number<Scalar>(v, key);
}

void reject_unknown(const nlohmann::json& params, const FamilySpec& spec) {
  for (const auto& [key, _] : params.items()) {
    const bool known = std::any_of(spec.parameters.begin(), spec.parameters.end(),
                                   [&](const ParamSpec& p) { return p.name == key; });
    if (!known) throw ParameterDomainError("family '" + spec.name + "' has no parameter '" + key + "'");
  }
}

}  // namespace

template <typename Scalar>
CoefficientSequence<Scalar> make_family(const std::string& name, const nlohmann::json& params) {
  const FamilySpec* spec = find_family(name);
  if (spec == nullptr) throw ParameterDomainError("unknown family '" + name + "'");
  if (!params.is_object()) throw ParameterDomainError("family parameters must be a JSON object");
  reject_unknown(params, *spec);

  auto get = [&](const std::string& key) -> nlohmann::json {
    if (params.contains(key)) return params.at(key);
    for (const auto& p : spec->parameters) {
      if (p.name == key) return p.default_value;
    }
    return nullptr;
  };

  if (name == "harmonic") return harmonic<Scalar>();
  if (name == "chebyshev-t") return chebyshev_t<Scalar>();
  if (name == "chebyshev-u") return chebyshev_u<Scalar>();
  if (name == "laguerre") return laguerre<Scalar>(static_cast<double>(parse_number<Scalar>(get("alpha"), "alpha")));
  if (name == "fibonacci-golden") return fibonacci_golden<Scalar>();
  if (name == "little-q-jacobi") {
    QParams<Scalar> p;
    p.q = parse_q<Scalar>(get("q"));
    p.validate();
    p.a = parse_q_expression<Scalar>(get("a"), "a", p.q);
    p.b = parse_q_expression<Scalar>(get("b"), "b", p.q);
    return little_q_jacobi_family(p);
  }
  if (name == "ismail-theta") {
    const double theta = static_cast<double>(parse_number<Scalar>(get("theta"), "theta"));
    const double alpha = static_cast<double>(parse_number<Scalar>(get("alpha"), "alpha"));
    if (alpha != std::floor(alpha)) throw ParameterDomainError("ismail-theta: alpha must be an integer");
    return ismail_theta<Scalar>(theta, static_cast<int>(alpha));
  }
  throw ParameterDomainError("unknown family '" + name + "'");
}

template CoefficientSequence<double> make_family<double>(const std::string&, const nlohmann::json&);
template CoefficientSequence<long double> make_family<long double>(const std::string&, const nlohmann::json&);

}  // namespace defosc
