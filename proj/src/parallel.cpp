#include "vague/parallel.hpp"

namespace vague {

namespace {
std::atomic<unsigned> g_default_threads{0};
}

unsigned default_threads() {
  const unsigned t = g_default_threads.load();
  if (t != 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_threads(unsigned threads) { g_default_threads = threads; }

}  // namespace vague
