#pragma once

// Conformally compact metrics in adapted charts (x, y1, ..., yk), the
// rescaled hyperbolic half-spaces, and their connection and curvature data.

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zeroform/expr.hpp"
#include "zeroform/jet.hpp"

namespace zeroform {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A metric g on a chart whose first coordinate x is a boundary defining
/// function. Stored through its smooth rescaling x^2 g.
///
/// A chart built with `conformally_compact = false` stores g itself; it is
/// only meant for flat and smooth sanity checks of the connection code.
class ChartMetric {
 public:
  ChartMetric() = default;
  /// `rescaled` is a full dim x dim matrix; only the upper triangle is read
  /// and mirrored, so symmetric slots share one expression.
  ChartMetric(std::vector<std::string> coords, const std::vector<std::vector<Expr>>& rescaled,
              bool conformally_compact = true);

  /// Parses every entry against `coords`.
  static ChartMetric parse(std::vector<std::string> coords,
                           const std::vector<std::vector<std::string>>& rescaled,
                           bool conformally_compact = true);

  std::size_t dim() const { return coords_.size(); }
  const std::vector<std::string>& coords() const { return coords_; }
  const Expr& rescaled(std::size_t i, std::size_t j) const;
  bool conformally_compact() const { return conformally_compact_; }

  /// Set when this chart is a rescaled half-space; enables exp_map.
  std::optional<double> model_scale() const { return model_scale_; }

  /// The smooth part x^2 g at p (any x), checked positive definite.
  Matrix rescaled_at(std::span<const double> p) const;

 private:
  friend class HalfSpaceModel;

  std::vector<std::string> coords_;
  std::vector<Expr> entries_;  // row-major, (i,j) and (j,i) share the tree
  bool conformally_compact_ = true;
  std::optional<double> model_scale_;
};

/// The metric c^{-2} (dx^2 + |dy|^2) / x^2 on {x > 0}.
class HalfSpaceModel {
 public:
  HalfSpaceModel(std::size_t dim, double scale);

  std::size_t dim() const { return dim_; }
  double scale() const { return scale_; }
  ChartMetric chart() const;

 private:
  std::size_t dim_;
  double scale_;
};

/// Default coordinate names x, y1, ..., y{dim-1}.
std::vector<std::string> default_coords(std::size_t dim, const std::string& x = "x",
                                        const std::string& y = "y");

/// Christoffel symbols, stored as gamma[k * d * d + i * d + j] = Gamma^k_ij.
struct Christoffel {
  std::size_t dim = 0;
  std::vector<double> values;
  double operator()(std::size_t k, std::size_t i, std::size_t j) const {
    return values[(k * dim + i) * dim + j];
  }
};

/// R^l_ijk with R(d_j, d_k) d_i = R^l_ijk d_l and
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
struct Riemann {
  std::size_t dim = 0;
  std::vector<double> values;
  double operator()(std::size_t l, std::size_t i, std::size_t j, std::size_t k) const {
    return values[((l * dim + i) * dim + j) * dim + k];
  }
};

/// Metric g at an interior point.
Matrix metric_at(const ChartMetric& M, std::span<const double> p);
Christoffel christoffel(const ChartMetric& M, std::span<const double> p);
Riemann riemann(const ChartMetric& M, std::span<const double> p);
/// <R(v,w)w, v> / (|v|^2 |w|^2 - <v,w>^2), coordinate components.
double sectional_curvature(const ChartMetric& M, std::span<const double> p,
                           const Vector& v, const Vector& w);

/// |dx/x|_g at a boundary point, sqrt of the (0,0) entry of the inverse of x^2 g.
double anchor_scale(const ChartMetric& M, std::span<const double> p);

/// Sign applied to the first frame vector when reporting. Internally e_0
/// points along the metric dual of dx/x; reports use the outward choice.
inline constexpr double kReportedNormalSign = -1.0;

/// Orthonormal frame at p written in the basis (x d_x, x d_y1, ...).
struct FramePoint {
  std::vector<double> point;
  Matrix frame;  // column a holds e_a, internal orientation

  /// The frame with e_0 flipped to the reported orientation.
  Matrix reported() const;
};

FramePoint frame_at(const ChartMetric& M, std::span<const double> p);

/// Frame coefficients (reported orientation) of a coordinate vector v at p.
Vector to_frame(const FramePoint& frame, const Vector& v);
/// Coordinate components of frame coefficients (reported orientation).
Vector from_frame(const FramePoint& frame, const Vector& coefficients);

// ---------------------------------------------------------------------------
// Jet-level connection data, used by the tension and Jacobi kernels.

/// Jets of g (row-major dim x dim) about an interior point p.
std::vector<TaylorJet> metric_jets(const ChartMetric& M, std::span<const double> p, int order);

/// Inverse of a symmetric positive definite jet matrix by elimination.
std::vector<TaylorJet> inverse_jets(std::span<const TaylorJet> m, std::size_t n);

struct LocalGeometry {
  std::size_t dim = 0;
  std::vector<TaylorJet> metric;          // order + 1
  std::vector<TaylorJet> inverse_metric;  // order + 1
  std::vector<TaylorJet> christoffel;     // order, indexed like Christoffel
};

/// Metric, inverse and Christoffel jets at p; the Christoffel jets have
/// order `order` (at most 3).
LocalGeometry local_geometry(const ChartMetric& M, std::span<const double> p, int order);

/// Curvature at the base point from a LocalGeometry of order >= 1.
Riemann riemann_from(const LocalGeometry& geometry);

// ---------------------------------------------------------------------------
// Half-space geodesics.

/// Endpoint of the geodesic from p with initial velocity v (coordinate
/// components), at time 1. The result does not depend on the scale.
std::vector<double> exp_map(const HalfSpaceModel& H, std::span<const double> p,
                            std::span<const double> v);
std::vector<TaylorJet> exp_map(const HalfSpaceModel& H, std::span<const TaylorJet> p,
                               std::span<const TaylorJet> v);

/// Geodesic distance in H.
double half_space_distance(const HalfSpaceModel& H, std::span<const double> p,
                           std::span<const double> q);

// ---------------------------------------------------------------------------
// Extrapolation.

/// Richardson table for samples taken at h, h/2, h/4, ... assuming an error
/// expansion in integer powers of h starting at `first_power`. Returns the
/// last diagonal entry.
double richardson(std::span<const double> samples, int first_power = 1);
Vector richardson(std::span<const Vector> samples, int first_power = 1);

struct CurvatureProbe {
  std::vector<double> abscissae;   // x = 2^-j
  std::vector<double> curvatures;  // sectional curvature at each x
  double extrapolated = 0.0;
  double expected = 0.0;  // -a_p^2 at the boundary point
  std::optional<double> empirical_rate;
};

/// Sectional curvature of the (x, y1) plane (or (x, y_{plane})) along the
/// ray x = 2^-j, j = 4..12 above boundary point y, extrapolated to x = 0.
/// Throws ExtrapolationDiverged if the samples do not settle.
CurvatureProbe curvature_limit_probe(const ChartMetric& M, std::span<const double> boundary_y,
                                     std::size_t plane = 1);

}  // namespace zeroform
