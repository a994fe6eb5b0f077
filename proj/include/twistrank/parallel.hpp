#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace twistrank::par {

// Thread count resolution order: explicit request > TWISTRANK_THREADS env
// variable > hardware concurrency. Returns at least 1.
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TWISTRANK_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Evaluate fn(i) for i in [0, n) and return the results indexed by i.
// Workers pull indices from a shared counter, so the schedule is dynamic,
// but results land in index order: any downstream reduction that walks the
// vector sequentially is bit-stable across thread counts.
template <class R, class Fn>
std::vector<R> indexed_map(std::size_t n, unsigned threads, Fn&& fn) {
  std::vector<R> out(n);
  threads = resolve_threads(threads);
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::atomic_flag error_claimed = ATOMIC_FLAG_INIT;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n || failed.load(std::memory_order_relaxed)) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        if (!error_claimed.test_and_set()) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  unsigned nt = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  pool.reserve(nt);
  for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

// Compensated (Kahan) accumulator. A fixed insertion order makes the sum
// bit-stable; the caller is responsible for that order.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace twistrank::par
