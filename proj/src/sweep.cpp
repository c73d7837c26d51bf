#include "zeroform/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

#include "zeroform/errors.hpp"
#include "zeroform/jacobi.hpp"

namespace zeroform {

std::size_t GridAxis::count() const {
  if (!(step > 0.0) || !(max >= min)) throw InputError("grid axis needs step > 0 and max >= min");
  return static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
}

std::size_t ModelGrid::lambda_entries() const { return diagonal_lambda ? std::min(m, n) : m * n; }

std::size_t ModelGrid::size() const {
  if (m + 1 > kMaxJetVars || n + 1 > kMaxJetVars) throw ShapeMismatch("grid dimensions too large");
  std::size_t total = 1;
  const std::size_t bc = beta.count();
  const std::size_t lc = lambda.count();
  for (std::size_t i = 0; i < n; ++i) total *= bc;
  for (std::size_t i = 0; i < lambda_entries(); ++i) total *= lc;
  return total;
}

void ModelGrid::decode(std::size_t index, double* b, double* l) const {
  const std::size_t bc = beta.count();
  const std::size_t lc = lambda.count();
  std::fill(l, l + n * m, 0.0);
  const std::size_t le = lambda_entries();
  for (std::size_t k = le; k-- > 0;) {
    const double v = lambda.value(index % lc);
    index /= lc;
    if (diagonal_lambda) {
      l[k * m + k] = v;
    } else {
      l[k] = v;
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    b[k] = beta.value(index % bc);
    index /= bc;
  }
}

LinearModelMap ModelGrid::model(std::size_t index) const {
  LinearModelMap v = make_model(m, n, a, A);
  std::array<double, kMaxJetVars> b{};
  std::array<double, kMaxJetVars * kMaxJetVars> l{};
  decode(index, b.data(), l.data());
  for (std::size_t i = 0; i < n; ++i) {
    v.beta(static_cast<Eigen::Index>(i)) = b[i];
    for (std::size_t j = 0; j < m; ++j) {
      v.lambda(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = l[i * m + j];
    }
  }
  return v;
}

GridPoint evaluate_grid_point(const ModelGrid& grid, std::size_t index, double tol) {
  std::array<double, kMaxJetVars> b{};
  std::array<double, kMaxJetVars * kMaxJetVars> l{};
  grid.decode(index, b.data(), l.data());
  const ModelNorms norms = model_norms(grid.m, grid.n, grid.a, grid.A, b.data(), l.data());

  GridPoint p;
  p.index = index;
  p.tension = norms.tension;
  p.bitension = norms.bitension;
  if (norms.tension < tol) {
    p.classification = Classification::Harmonic;
  } else if (norms.bitension < tol) {
    p.classification = Classification::ProperBiharmonic;
    bool zero = true;
    for (std::size_t i = 0; i < grid.n; ++i) zero = zero && b[i] == 0.0;
    for (std::size_t i = 0; i < grid.n * grid.m; ++i) zero = zero && l[i] == 0.0;
    p.violation = !zero;
  }
  return p;
}

GridSummary sweep_grid(const ModelGrid& grid, double tol, unsigned jobs,
                       const std::function<bool(const GridPoint&)>& keep,
                       const std::function<void(const GridPoint&)>& emit) {
  const std::size_t total = grid.size();
  const unsigned threads = std::max(1u, jobs);
  // Fixed-size blocks, each evaluated by one thread and emitted in order.
  constexpr std::size_t kBlock = 1 << 16;
  const std::size_t blocks = (total + kBlock - 1) / kBlock;

  GridSummary summary;
  summary.points = total;
  const std::size_t wave = threads;
  for (std::size_t first = 0; first < blocks; first += wave) {
    const std::size_t count = std::min(wave, blocks - first);
    std::vector<std::vector<GridPoint>> kept(count);
    std::vector<std::array<std::size_t, 4>> tallies(count);
    auto work = [&](std::size_t slot) {
      const std::size_t lo = (first + slot) * kBlock;
      const std::size_t hi = std::min(total, lo + kBlock);
      auto& t = tallies[slot];
      t.fill(0);
      for (std::size_t i = lo; i < hi; ++i) {
        const GridPoint p = evaluate_grid_point(grid, i, tol);
        ++t[static_cast<std::size_t>(p.classification)];
        if (p.violation) ++t[3];
        if (keep(p)) kept[slot].push_back(p);
      }
    };
    if (threads == 1 || count == 1) {
      for (std::size_t s = 0; s < count; ++s) work(s);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t s = 0; s < count; ++s) pool.emplace_back(work, s);
      for (auto& th : pool) th.join();
    }
    for (std::size_t s = 0; s < count; ++s) {
      summary.harmonic += tallies[s][0];
      summary.proper_biharmonic += tallies[s][1];
      summary.not_biharmonic += tallies[s][2];
      summary.violations += tallies[s][3];
      for (const auto& p : kept[s]) emit(p);
    }
  }
  return summary;
}

}  // namespace zeroform
