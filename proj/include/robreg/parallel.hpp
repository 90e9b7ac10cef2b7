#pragma once

// Data-parallel kernels shared by the sampling estimators.
//
// Every kernel takes an Exec policy. Exec::Serial is the reference path and
// is what the tests compare against; Exec::Parallel distributes indices over
// OpenMP threads. Per-index work must be a pure function of the index, and
// reductions break ties by the smallest index, so both policies return
// bitwise-identical results.

#include <omp.h>

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace robreg {

enum class Exec { Serial, Parallel };

/// Process-wide default used by the high-level operations.
Exec default_exec();
void set_default_exec(Exec exec);

/// Sets the OpenMP thread count used by Exec::Parallel (0 keeps the runtime default).
void set_thread_count(int threads);

struct IndexedMax {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = std::numeric_limits<std::size_t>::max();

  bool found() const { return index != std::numeric_limits<std::size_t>::max(); }

  void offer(double v, std::size_t i) {
    if (std::isnan(v)) return;
    if (v > value || (v == value && i < index)) {
      value = v;
      index = i;
    }
  }

  void merge(const IndexedMax& other) {
    if (other.found()) offer(other.value, other.index);
  }
};

template <class F>
void for_each_index(Exec exec, std::size_t n, F&& body) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

/// out[i] = value(i).
template <class F>
std::vector<double> map_indices(Exec exec, std::size_t n, F&& value) {
  std::vector<double> out(n);
  for_each_index(exec, n, [&](std::size_t i) { out[i] = value(i); });
  return out;
}

/// Largest value(i) over i < n (NaN skipped), smallest index on ties.
template <class F>
IndexedMax argmax_index(Exec exec, std::size_t n, F&& value) {
  IndexedMax best;
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) best.offer(value(i), i);
    return best;
  }
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
  {
    IndexedMax local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      local.offer(value(static_cast<std::size_t>(i)), static_cast<std::size_t>(i));
    }
#pragma omp critical(robreg_argmax)
    best.merge(local);
  }
  return best;
}

}  // namespace robreg
