#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "robreg/common.hpp"
#include "robreg/domain.hpp"
#include "robreg/function_model.hpp"

namespace robreg {

using FixtureParams = std::map<std::string, double>;

/// A named test problem with its documented reference values.
struct Fixture {
  std::string name;
  std::string description;
  std::optional<FunctionModel> model;  // absent for pure set fixtures
  DomainModel domain;
  Vec reference_point;
  std::optional<double> reference_value;
  /// Closed forms of one-parameter quantities, keyed by name (e.g. "alpha" for
  /// the intro example's minimizer, "profile" for g at the reference point).
  std::map<std::string, std::function<double(double)>> closed_forms;
  /// Matrix fixtures (jordan2) carry the matrix itself.
  std::optional<Mat> matrix;
  /// Points or pairs where a set diagnostic has a known value.
  std::vector<Vec> witness_points;
  std::vector<std::pair<Vec, Vec>> witness_pairs;
};

/// Throws ConfigError for unknown names or invalid parameters.
Fixture load_fixture(const std::string& name, const FixtureParams& params = {});

std::vector<std::string> fixture_names();

/// Minimizer of the regularized intro function: (1 + 2 eps - sqrt(1 + 8 eps)) / 2.
double intro_alpha(double eps);

}  // namespace robreg
