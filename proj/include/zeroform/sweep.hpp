#pragma once

// Dense parameter grids over model maps, classified point by point from the
// closed forms.

#include <cstddef>
#include <functional>
#include <vector>

#include "zeroform/indicial.hpp"

namespace zeroform {

struct GridAxis {
  double min = -2.0;
  double max = 2.0;
  double step = 0.25;

  std::size_t count() const;
  double value(std::size_t i) const { return min + static_cast<double>(i) * step; }
};

/// Every beta entry runs over `beta`, every lambda entry (or only the
/// diagonal) over `lambda`. Points are indexed lexicographically with the
/// last lambda entry varying fastest.
struct ModelGrid {
  std::size_t m = 1;
  std::size_t n = 1;
  double a = 1.0;
  double A = 1.0;
  GridAxis beta;
  GridAxis lambda;
  bool diagonal_lambda = false;

  std::size_t lambda_entries() const;
  std::size_t size() const;
  /// beta: n entries; lambda: n x m row-major (zeros off the diagonal when
  /// diagonal_lambda).
  void decode(std::size_t index, double* beta, double* lambda) const;
  LinearModelMap model(std::size_t index) const;
};

struct GridPoint {
  std::size_t index = 0;
  double tension = 0.0;
  double bitension = 0.0;
  Classification classification = Classification::NotBiharmonic;
  /// Biharmonic but neither harmonic nor the zero-boundary-data model.
  bool violation = false;
};

GridPoint evaluate_grid_point(const ModelGrid& grid, std::size_t index, double tol);

struct GridSummary {
  std::size_t points = 0;
  std::size_t harmonic = 0;
  std::size_t proper_biharmonic = 0;
  std::size_t not_biharmonic = 0;
  std::size_t violations = 0;
};

/// Evaluates the whole grid on `jobs` threads. `emit` is called in index
/// order, on the calling thread, for every point it accepts through `keep`.
GridSummary sweep_grid(const ModelGrid& grid, double tol, unsigned jobs,
                       const std::function<bool(const GridPoint&)>& keep,
                       const std::function<void(const GridPoint&)>& emit);

}  // namespace zeroform
