#include "dpar/parallel.hpp"

#include <atomic>

#include "dpar/errors.hpp"

namespace dpar {

namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int threads) {
  if (threads < 1) throw ParameterError("thread count must be at least 1");
  g_threads.store(threads);
}

int num_threads() { return g_threads.load(); }

}  // namespace dpar
