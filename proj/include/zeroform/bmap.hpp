#pragma once

// Maps between conformally compact charts that send boundary to boundary
// transversally, and their pointwise invariants.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zeroform/geometry.hpp"

namespace zeroform {

/// (x, y) -> (gamma x, beta x + lambda y) between the half-spaces of scale a
/// (dimension m+1) and A (dimension n+1).
struct LinearModelMap {
  std::size_t m = 0;
  std::size_t n = 0;
  double a = 1.0;
  double A = 1.0;
  double gamma = 1.0;
  Vector beta;    // n
  Matrix lambda;  // n x m

  /// Throws ShapeMismatch or PreconditionError on inconsistent fields.
  void check() const;
  /// |beta|^2 + |lambda|_F^2
  double sigma_sq() const;
};

/// Builds a model with zero beta and lambda of the right shapes.
LinearModelMap make_model(std::size_t m, std::size_t n, double a = 1.0, double A = 1.0);

class BMapSpec {
 public:
  static BMapSpec model(const LinearModelMap& v);
  /// Components u^0..u^n are expressions in the source coordinates.
  static BMapSpec expressions(ChartMetric source, ChartMetric target, std::vector<Expr> components);

  const ChartMetric& source() const { return source_; }
  const ChartMetric& target() const { return target_; }
  std::size_t source_dim() const { return source_.dim(); }
  std::size_t target_dim() const { return target_.dim(); }

  const std::optional<LinearModelMap>& model_map() const { return model_; }
  const std::vector<Expr>& components() const { return components_; }

  /// Jets of every component about p.
  std::vector<TaylorJet> jets_at(std::span<const double> p, int order) const;
  std::vector<double> value_at(std::span<const double> p) const;

 private:
  ChartMetric source_;
  ChartMetric target_;
  std::vector<Expr> components_;
  std::optional<LinearModelMap> model_;
};

struct ValidationFailure {
  std::vector<double> point;
  std::string check;  // "boundary_to_boundary", "interior_to_interior", "transversal"
  double value = 0.0;
};

struct ValidationReport {
  bool ok = true;
  std::size_t boundary_samples = 0;
  std::size_t interior_samples = 0;
  std::vector<ValidationFailure> failures;
};

/// 3^m boundary points (y in {-1/2, 0, 1/2}^m) and 3^(m+1) interior points
/// (x in {1/8, 1/4, 1/2}).
std::vector<std::vector<double>> default_validation_samples(std::size_t source_dim);

/// Sample-based check that u^0 vanishes exactly on the boundary samples with
/// positive normal derivative there, and is positive at interior samples.
ValidationReport validate(const BMapSpec& u, std::span<const std::vector<double>> samples = {},
                          double tol = 1e-12);

/// The differential of u in orthonormal frames of source and target
/// (reported orientation), (n+1) x (m+1). Valid on the boundary as well.
Matrix zero_differential(const BMapSpec& u, std::span<const double> p);

/// Squared Frobenius norm of zero_differential.
double energy_density(const BMapSpec& u, std::span<const double> p);

/// Tension field at an interior point, in the target frame.
Vector tension(const BMapSpec& u, std::span<const double> p);

/// Closed form of the tension of a model map with gamma = 1, target frame.
Vector tension_model(const LinearModelMap& v);

struct BoundaryData {
  std::vector<double> point;
  double a = 1.0;  // source anchor scale
  double A = 1.0;  // target anchor scale at u(p)
  double gamma = 1.0;
  Vector beta;
  Matrix lambda;
  bool normalized = false;
  /// Normalization rescales the target coordinates by 1/gamma.
  std::string rescaled_side = "target";
  /// Orthogonal changes of frame applied by normalization (identity otherwise):
  /// lambda_normalized = target_rotation^T * (lambda / gamma) * source_rotation.
  Matrix source_rotation;
  Matrix target_rotation;
};

BoundaryData boundary_data(const BMapSpec& u, std::span<const double> p, bool normalize);

/// The normalized model (m, n, a_p, A_q, 1, beta, lambda) at a boundary point.
LinearModelMap model_map_at(const BMapSpec& u, std::span<const double> p);

// ---------------------------------------------------------------------------
// Jet kernels shared with the Jacobi operator.

/// Christoffel symbols of the target, expanded at u(p) to `order` and
/// composed with the map jets u. Indexed like Christoffel.
std::vector<TaylorJet> pulled_back_christoffel(const ChartMetric& target,
                                               std::span<const TaylorJet> u, int order);

/// Coordinate tension jets of order (u order - 2).
std::vector<TaylorJet> tension_jets(const BMapSpec& spec, std::span<const double> p,
                                    std::span<const TaylorJet> u);

}  // namespace zeroform
