#pragma once

// Family registry: maps a family name plus a JSON parameter object to a
// CoefficientSequence.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "defosc/recurrence.hpp"

namespace defosc {

struct ParamSpec {
  std::string name;
  std::string type;  // "number" | "integer" | "q-expression"
  double default_value = 0.0;
  std::optional<double> exclusive_min;
  std::optional<double> exclusive_max;
  std::string description;
};

struct FamilySpec {
  std::string name;
  std::string description;
  bool symmetric = false;
  std::vector<ParamSpec> parameters;
};

const std::vector<FamilySpec>& registered_families();

/// nullptr if the name is unknown.
const FamilySpec* find_family(const std::string& name);

nlohmann::json to_json(const FamilySpec& spec);

/// Builds a registered family. Parameters are read from `params`; missing
/// ones take their defaults. Strings are accepted where a q-expression is
/// allowed: "golden" for q, and "q" or "q^k" for a and b.
/// Throws ParameterDomainError for unknown names or malformed parameters.
template <typename Scalar>
CoefficientSequence<Scalar> make_family(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

extern template CoefficientSequence<double> make_family<double>(const std::string&, const nlohmann::json&);
extern template CoefficientSequence<long double> make_family<long double>(const std::string&, const nlohmann::json&);

}  // namespace defosc
