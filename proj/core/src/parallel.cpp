#include "citefit/parallel.hpp"

namespace citefit {
namespace {

unsigned hardware_workers() noexcept {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

std::atomic<unsigned> g_default_workers{hardware_workers()};

}  // namespace

unsigned default_workers() noexcept { return g_default_workers.load(); }

void set_default_workers(unsigned workers) noexcept {
  g_default_workers.store(workers == 0 ? hardware_workers() : workers);
}

}  // namespace citefit
