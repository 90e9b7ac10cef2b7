#pragma once

// CSV reports with a metadata line, and matrix/vector input parsing.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "robreg/common.hpp"

namespace robreg::report {

/// %.17g; "inf", "-inf" and "nan" for non-finite values.
std::string num(double v);

std::uint64_t fnv1a(std::string_view text);
std::string hex64(std::uint64_t v);

struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_meta(std::string key, std::string value) { meta.emplace_back(std::move(key), std::move(value)); }
  void add_row(std::vector<std::string> row);
};

/// "# meta: k=v;k=v", then the header, then the rows. Fields containing
/// commas or quotes are quoted.
std::string to_csv(const Table& t);

/// Inline literals: "[[1, 2], [3, 4]]" (real) or entries written as
/// [re, im] pairs for complex input. Throws ConfigError.
Mat parse_matrix(const std::string& text);
CMat parse_complex_matrix(const std::string& text);
Vec parse_vector(const std::string& text);

/// Matrix Market coordinate or array files; real, integer or complex;
/// general, symmetric, skew-symmetric or hermitian. Throws ConfigError.
CMat read_matrix_market(const std::string& path);

}  // namespace robreg::report
