#pragma once

// Frozen reproduction experiments. Each id computes a table and a verdict
// against fixed thresholds; output depends only on the options, never on the
// thread count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robreg/parallel.hpp"
#include "robreg/report.hpp"

namespace robreg {

struct ReproduceOptions {
  std::uint64_t seed = 1;
  std::optional<double> eps;  // only intro1d-minimizer takes it
  Exec exec = Exec::Parallel;
};

struct ExperimentResult {
  report::Table table;
  bool pass = false;
  std::string summary;
};

/// intro1d-minimizer, root-k-calm, example24b-moduli, sdp-norm-equivalence,
/// sdp-quad-equivalence, jordan2-abscissa, o-one-over-eps, calm-lip-agreement,
/// square-peaceful, crossed-axes-radial, epi-dyadic-fail, cone-pythagoras.
const std::vector<std::string>& reproduce_ids();

/// Throws ConfigError for an unknown id or an option the id does not take.
ExperimentResult reproduce(const std::string& id, const ReproduceOptions& opt);

}  // namespace robreg
