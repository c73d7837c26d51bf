#pragma once

// The Jacobi operator of a map, J W = Delta W + tr_g R(du, W) du, with the
// positive rough Laplacian Delta = -tr_g nabla^2 on the pulled-back bundle.

#include <functional>
#include <span>
#include <vector>

#include "zeroform/bmap.hpp"

namespace zeroform {

/// A vector field along a map, given by its target-coordinate components as
/// functions of the source coordinates.
class FieldAlongMap {
 public:
  using JetSource = std::function<std::vector<TaylorJet>(std::span<const double> p, int order)>;

  static FieldAlongMap expressions(std::vector<Expr> components);
  /// The tension field of the map it is applied with.
  static FieldAlongMap tension_of();
  static FieldAlongMap from_jets(JetSource source);

  bool is_tension() const { return kind_ == Kind::Tension; }
  const std::vector<Expr>& components() const { return components_; }

  /// Component jets about p, order at most 2 (at most 2 for tension-of).
  std::vector<TaylorJet> jets_at(const BMapSpec& u, std::span<const double> p, int order) const;

 private:
  enum class Kind { Expressions, Tension, Jets };
  Kind kind_ = Kind::Expressions;
  std::vector<Expr> components_;
  JetSource source_;
};

/// Target-frame vectors (reported orientation) at u(p).
struct JacobiResult {
  Vector laplacian;
  Vector curvature;
  Vector total;
};

JacobiResult jacobi_apply(const BMapSpec& u, const FieldAlongMap& W, std::span<const double> p);

/// Same operator in target coordinates, from map jets (order >= 2) and
/// field jets (order >= 2) about p.
struct JacobiCoordinates {
  Vector laplacian;
  Vector curvature;
};
JacobiCoordinates jacobi_coordinates(const BMapSpec& spec, std::span<const double> p,
                                     std::span<const TaylorJet> u, std::span<const TaylorJet> W);

/// J_u tau(u) at an interior point, target frame. Uses order-4 map jets.
Vector bitension(const BMapSpec& u, std::span<const double> p);

/// J_u tau(u) with the derivatives of tau taken by finite differences
/// (five-point stencils, step h, Richardson on mixed partials).
Vector bitension_fd(const BMapSpec& u, std::span<const double> p, double h = 1e-3);

/// Closed form a^2 C t for a model map with gamma = 1, target frame.
Vector model_bitension(const LinearModelMap& v);

/// d/dt tau(exp_u(tW)) at t = 0 equals kLinearizationSign * J_u W at
/// harmonic maps.
inline constexpr double kLinearizationSign = -1.0;

struct LinearizationReport {
  Vector derivative;  // target frame
  Vector jacobi;      // target frame, J_u W
  double discrepancy = 0.0;
};

/// Central differences in t (step h, one Richardson step). Needs a
/// half-space target; throws TargetNotModel otherwise.
LinearizationReport linearization_check(const BMapSpec& u, const FieldAlongMap& W,
                                        std::span<const double> p, double h = 1e-4);

/// Frame norms of the closed-form tension and bitension of a model map with
/// gamma = 1. `beta` has n entries, `lambda` is row-major n x m. No
/// allocation; meant for dense parameter grids.
struct ModelNorms {
  double tension = 0.0;
  double bitension = 0.0;
};
ModelNorms model_norms(std::size_t m, std::size_t n, double a, double A, const double* beta,
                       const double* lambda);

}  // namespace zeroform
