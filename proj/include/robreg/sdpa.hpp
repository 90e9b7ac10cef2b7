#pragma once

// SDPA sparse format (.dat-s) for the LMI instances.
//
// The problem is: minimize c^T y subject to sum_k y_k F_k - F_0 PSD, block by
// block. Entries are written upper-triangle only, 1-indexed, with %.17g so a
// re-read reproduces every coefficient exactly.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "robreg/common.hpp"
#include "robreg/lmi.hpp"

namespace robreg::sdpa {

struct Problem {
  std::vector<std::string> variable_names;  // written as a comment line
  std::vector<Eigen::Index> block_sizes;
  Vec objective;
  /// F[k][b]: coefficient matrix of variable k (k = 0 is the constant) in block b.
  std::vector<std::vector<Mat>> F;

  int variables() const { return static_cast<int>(objective.size()); }
};

/// Variables (t, mu); one block of size m + 1 + n; minimize t.
Problem from_norm(const lmi::NormInstance& inst);

/// Variables (t, s, mu); the LMI block of size 2n + 1 and a 2x2 block
/// [[1, s], [s, t - d + c^T H^-1 c]] carrying t - s^2 + c^T H^-1 c - d >= 0.
Problem from_quad(const lmi::QuadInstance& inst);

/// Optional decision values are recorded in a comment line.
void write(std::ostream& os, const Problem& p, const std::optional<Vec>& decision = std::nullopt);
/// Throws Error when the file cannot be written.
void export_file(const std::string& path, const Problem& p, const std::optional<Vec>& decision = std::nullopt);

/// Parses a .dat-s stream; comment lines start with '*' or '"'. Throws ConfigError on malformed input.
Problem read(std::istream& is);
Problem read_file(const std::string& path);

/// sum_k y_k F_k[b] - F_0[b].
Mat evaluate_block(const Problem& p, const Vec& y, std::size_t block);

}  // namespace robreg::sdpa
