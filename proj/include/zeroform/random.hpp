#pragma once

// Seeded sampling and order-stable parallel loops for randomized batteries.

#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <string_view>
#include <thread>
#include <vector>

#include "zeroform/bmap.hpp"

namespace zeroform {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a, for turning a check name into a stream id.
inline std::uint64_t stream_id(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Independent generator for item `index` of stream `stream`.
  static Rng for_item(std::uint64_t seed, std::string_view stream, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed ^ stream_id(stream)) + index));
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  std::size_t integer(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(uniform() * static_cast<double>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

/// Random model with a, A in [scale_lo, scale_hi] and entries in [-range, range].
inline LinearModelMap random_model(Rng& rng, std::size_t m, std::size_t n, double range = 2.0,
                                   double scale_lo = 0.5, double scale_hi = 2.0) {
  LinearModelMap v = make_model(m, n, rng.uniform(scale_lo, scale_hi), rng.uniform(scale_lo, scale_hi));
  for (Eigen::Index i = 0; i < v.beta.size(); ++i) v.beta(i) = rng.uniform(-range, range);
  for (Eigen::Index i = 0; i < v.lambda.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.lambda.cols(); ++j) v.lambda(i, j) = rng.uniform(-range, range);
  }
  return v;
}

/// Calls f(i) for i in [0, count) on up to `jobs` threads. Results must be
/// written to per-index slots by f. The exception of the lowest failing index
/// is rethrown.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& f) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::mutex lock;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> g(lock);
        if (next >= count) return;
        i = next++;
      }
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<std::size_t>(jobs, count);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace zeroform
