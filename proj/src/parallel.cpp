#include "robreg/parallel.hpp"

#include <atomic>

namespace robreg {

namespace {
std::atomic<Exec> g_exec{Exec::Parallel};
}

Exec default_exec() { return g_exec.load(); }

void set_default_exec(Exec exec) { g_exec.store(exec); }

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace robreg
