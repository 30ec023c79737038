#include "spintex/threading.hpp"

#include <atomic>

namespace spintex {

namespace {
std::atomic<int> g_thread_budget{1};
}

int thread_budget() { return g_thread_budget.load(); }

void set_thread_budget(int n) { g_thread_budget.store(n < 1 ? 1 : n); }

}  // namespace spintex
