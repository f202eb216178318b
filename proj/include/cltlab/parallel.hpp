#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace cltlab {

/// Welford accumulator; `merge` is Chan's pairwise update.
struct RunningStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(o.count);
    const double delta = o.mean - mean;
    const double n = na + nb;
    mean += delta * nb / n;
    m2 += o.m2 + delta * delta * na * nb / n;
    count += o.count;
  }

  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double standard_error() const { return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

/// Replications per chunk. Chunk k always draws from substream k, so results
/// do not depend on how many threads run.
inline constexpr std::uint64_t kChunkSize = 1u << 14;

/// Worker count: CLTLAB_THREADS if set, else hardware concurrency.
unsigned worker_count();

/// Runs fn(chunk_index, first_rep, rep_count) -> Acc over all chunks covering
/// `total` replications and folds the results with Acc::merge in chunk order.
template <class Acc, class Fn>
Acc run_chunked(std::uint64_t total, Fn&& fn, std::uint64_t chunk = kChunkSize) {
  const std::uint64_t chunks = (total + chunk - 1) / chunk;
  std::vector<Acc> parts(chunks);
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(chunks, 1)));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::uint64_t k = w; k < chunks; k += workers) {
        const std::uint64_t first = k * chunk;
        parts[k] = fn(k, first, std::min(chunk, total - first));
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  Acc out{};
  for (auto& p : parts) out.merge(p);
  return out;
}

}  // namespace cltlab
