#include "zeroform/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "zeroform/errors.hpp"

namespace zeroform {

ChartMetric::ChartMetric(std::vector<std::string> coords,
                         const std::vector<std::vector<Expr>>& rescaled,
                         bool conformally_compact)
    : coords_(std::move(coords)), conformally_compact_(conformally_compact) {
  const std::size_t d = coords_.size();
  if (d == 0) throw ShapeMismatch("metric needs at least one coordinate");
  if (d > kMaxJetVars) {
    throw ShapeMismatch("metric dimension " + std::to_string(d) + " exceeds " +
                        std::to_string(kMaxJetVars));
  }
  if (rescaled.size() != d) throw ShapeMismatch("rescaled metric must have one row per coordinate");
  for (const auto& row : rescaled) {
    if (row.size() != d) throw ShapeMismatch("rescaled metric must be square");
  }
  entries_.resize(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      const Expr& e = rescaled[i][j];
      if (e.arity() > d) throw ShapeMismatch("metric entry uses an undeclared coordinate");
      entries_[i * d + j] = e;
      entries_[j * d + i] = e;
    }
  }
}

ChartMetric ChartMetric::parse(std::vector<std::string> coords,
                               const std::vector<std::vector<std::string>>& rescaled,
                               bool conformally_compact) {
  std::vector<std::vector<Expr>> exprs(rescaled.size());
  for (std::size_t i = 0; i < rescaled.size(); ++i) {
    for (std::size_t j = 0; j < rescaled[i].size(); ++j) {
      // The lower triangle is mirrored; parse it only to surface typos.
      exprs[i].push_back(zeroform::parse(rescaled[i][j], std::span<const std::string>(coords)));
    }
  }
  return ChartMetric(std::move(coords), exprs, conformally_compact);
}

const Expr& ChartMetric::rescaled(std::size_t i, std::size_t j) const {
  if (i >= dim() || j >= dim()) throw ShapeMismatch("metric index out of range");
  return entries_[i * dim() + j];
}

namespace {

void check_point(const ChartMetric& M, std::span<const double> p) {
  if (p.size() != M.dim()) {
    throw ShapeMismatch("point has " + std::to_string(p.size()) + " coordinates, chart has " +
                        std::to_string(M.dim()));
  }
}

void check_interior(const ChartMetric& M, std::span<const double> p) {
  check_point(M, p);
  if (M.conformally_compact() && !(p[0] > 0.0)) {
    throw BoundaryEvaluation("interior quantity requested at x = " + std::to_string(p[0]));
  }
}

void check_positive_definite(const Matrix& g) {
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("metric is not positive definite");
}

}  // namespace

Matrix ChartMetric::rescaled_at(std::span<const double> p) const {
  check_point(*this, p);
  const std::size_t d = dim();
  Matrix g(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      const double v = evaluate(entries_[i * d + j], p);
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  check_positive_definite(g);
  return g;
}

HalfSpaceModel::HalfSpaceModel(std::size_t dim, double scale) : dim_(dim), scale_(scale) {
  if (dim == 0 || dim > kMaxJetVars) throw ShapeMismatch("half-space dimension out of range");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw PreconditionError("half-space scale must be positive");
  }
}

ChartMetric HalfSpaceModel::chart() const {
  const Expr diag = Expr::number(1.0 / (scale_ * scale_));
  std::vector<std::vector<Expr>> rows(dim_, std::vector<Expr>(dim_, Expr::number(0.0)));
  for (std::size_t i = 0; i < dim_; ++i) rows[i][i] = diag;
  ChartMetric M(default_coords(dim_), rows, true);
  M.model_scale_ = scale_;
  return M;
}

std::vector<std::string> default_coords(std::size_t dim, const std::string& x,
                                        const std::string& y) {
  std::vector<std::string> out{x};
  for (std::size_t i = 1; i < dim; ++i) out.push_back(y + std::to_string(i));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<TaylorJet> metric_jets(const ChartMetric& M, std::span<const double> p, int order) {
  check_interior(M, p);
  const std::size_t d = M.dim();
  std::vector<TaylorJet> out(d * d);
  std::optional<TaylorJet> inv_x2;
  if (M.conformally_compact()) {
    inv_x2 = pow(TaylorJet::variable(d, order, 0, p[0]), -2);
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      TaylorJet e = eval_jet(M.rescaled(i, j), p, order);
      if (inv_x2) e *= *inv_x2;
      out[i * d + j] = e;
      out[j * d + i] = std::move(e);
    }
  }
  return out;
}

std::vector<TaylorJet> inverse_jets(std::span<const TaylorJet> m, std::size_t n) {
  if (m.size() != n * n) throw ShapeMismatch("jet matrix size mismatch");
  if (n == 0) return {};
  std::vector<TaylorJet> a(m.begin(), m.end());
  const std::size_t vars = a[0].num_vars();
  const int order = a[0].order();
  std::vector<TaylorJet> inv(n * n, TaylorJet(vars, order));
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = TaylorJet::constant(vars, order, 1.0);

  // Gauss-Jordan without pivoting; pivots of an SPD matrix stay positive.
  for (std::size_t c = 0; c < n; ++c) {
    if (!(a[c * n + c].value() > 0.0)) {
      throw NotPositiveDefinite("non-positive pivot while inverting a metric jet");
    }
    const TaylorJet r = reciprocal(a[c * n + c]);
    for (std::size_t k = 0; k < n; ++k) {
      a[c * n + k] *= r;
      inv[c * n + k] *= r;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const TaylorJet f = a[i * n + c];
      bool zero = std::all_of(f.coefficients().begin(), f.coefficients().end(),
                              [](double v) { return v == 0.0; });
      if (zero) continue;
      for (std::size_t k = 0; k < n; ++k) {
        a[i * n + k] -= f * a[c * n + k];
        inv[i * n + k] -= f * inv[c * n + k];
      }
    }
  }
  return inv;
}

LocalGeometry local_geometry(const ChartMetric& M, std::span<const double> p, int order) {
  if (order < 0 || order + 1 > kMaxJetOrder) {
    throw PreconditionError("Christoffel jet order must be in [0, 3]");
  }
  LocalGeometry geo;
  const std::size_t d = M.dim();
  geo.dim = d;
  geo.metric = metric_jets(M, p, order + 1);
  geo.inverse_metric = inverse_jets(geo.metric, d);

  // dg[l][i][j] = d_l g_ij
  std::vector<TaylorJet> dg(d * d * d);
  for (std::size_t l = 0; l < d; ++l) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) {
        dg[(l * d + i) * d + j] = geo.metric[i * d + j].derivative(l);
        dg[(l * d + j) * d + i] = dg[(l * d + i) * d + j];
      }
    }
  }
  auto dgl = [&](std::size_t l, std::size_t i, std::size_t j) -> const TaylorJet& {
    return dg[(l * d + i) * d + j];
  };

  geo.christoffel.assign(d * d * d, TaylorJet(d, order));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      // first kind: [ij, l] = (d_i g_jl + d_j g_il - d_l g_ij) / 2
      std::vector<TaylorJet> first(d);
      for (std::size_t l = 0; l < d; ++l) {
        first[l] = (dgl(i, j, l) + dgl(j, i, l) - dgl(l, i, j)) * 0.5;
      }
      for (std::size_t k = 0; k < d; ++k) {
        TaylorJet s(d, order);
        for (std::size_t l = 0; l < d; ++l) {
          s += geo.inverse_metric[k * d + l].truncated(order) * first[l];
        }
        geo.christoffel[(k * d + i) * d + j] = s;
        geo.christoffel[(k * d + j) * d + i] = std::move(s);
      }
    }
  }
  return geo;
}

Riemann riemann_from(const LocalGeometry& geo) {
  const std::size_t d = geo.dim;
  if (geo.christoffel.empty() || geo.christoffel[0].order() < 1) {
    throw PreconditionError("curvature needs Christoffel jets of order >= 1");
  }
  auto G = [&](std::size_t k, std::size_t i, std::size_t j) -> const TaylorJet& {
    return geo.christoffel[(k * d + i) * d + j];
  };
  Riemann R;
  R.dim = d;
  R.values.assign(d * d * d * d, 0.0);
  for (std::size_t l = 0; l < d; ++l) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
          double r = G(l, k, i).d(j) - G(l, j, i).d(k);
          for (std::size_t q = 0; q < d; ++q) {
            r += G(l, j, q).value() * G(q, k, i).value() - G(l, k, q).value() * G(q, j, i).value();
          }
          R.values[((l * d + i) * d + j) * d + k] = r;
        }
      }
    }
  }
  return R;
}

Matrix metric_at(const ChartMetric& M, std::span<const double> p) {
  check_interior(M, p);
  Matrix g = M.rescaled_at(p);
  if (M.conformally_compact()) g /= p[0] * p[0];
  check_positive_definite(g);
  return g;
}

Christoffel christoffel(const ChartMetric& M, std::span<const double> p) {
  const LocalGeometry geo = local_geometry(M, p, 0);
  Christoffel out;
  out.dim = geo.dim;
  out.values.reserve(geo.christoffel.size());
  for (const auto& j : geo.christoffel) out.values.push_back(j.value());
  return out;
}

Riemann riemann(const ChartMetric& M, std::span<const double> p) {
  return riemann_from(local_geometry(M, p, 1));
}

double sectional_curvature(const ChartMetric& M, std::span<const double> p, const Vector& v,
                           const Vector& w) {
  const auto d = static_cast<Eigen::Index>(M.dim());
  if (v.size() != d || w.size() != d) throw ShapeMismatch("plane vectors have the wrong size");
  const Matrix g = metric_at(M, p);
  const double vv = v.dot(g * v);
  const double ww = w.dot(g * w);
  const double vw = v.dot(g * w);
  const double gram = vv * ww - vw * vw;
  if (!(gram > 1e-12 * vv * ww)) throw DegeneratePlane("plane vectors are linearly dependent");

  const Riemann R = riemann(M, p);
  // R(v,w)w = R^l_ijk w^i v^j w^k d_l
  Vector rvww = Vector::Zero(d);
  for (Eigen::Index l = 0; l < d; ++l) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
          s += R(static_cast<std::size_t>(l), static_cast<std::size_t>(i),
                 static_cast<std::size_t>(j), static_cast<std::size_t>(k)) *
               w(i) * v(j) * w(k);
        }
      }
    }
    rvww(l) = s;
  }
  return v.dot(g * rvww) / gram;
}

double anchor_scale(const ChartMetric& M, std::span<const double> p) {
  if (!M.conformally_compact()) throw PreconditionError("anchor scale needs a conformally compact chart");
  if (p.empty() || p[0] != 0.0) throw PreconditionError("anchor scale is defined at boundary points (x = 0)");
  const Matrix g = M.rescaled_at(p);
  const Matrix inv = g.llt().solve(Matrix::Identity(g.rows(), g.cols()));
  return std::sqrt(inv(0, 0));
}

Matrix FramePoint::reported() const {
  Matrix out = frame;
  out.col(0) *= kReportedNormalSign;
  return out;
}

FramePoint frame_at(const ChartMetric& M, std::span<const double> p) {
  if (!M.conformally_compact()) throw PreconditionError("frames need a conformally compact chart");
  const Matrix g = M.rescaled_at(p);
  const auto d = g.rows();
  const Matrix inv = g.llt().solve(Matrix::Identity(d, d));

  FramePoint out;
  out.point.assign(p.begin(), p.end());
  out.frame = Matrix::Zero(d, d);
  out.frame.col(0) = inv.col(0) / std::sqrt(inv(0, 0));
  for (Eigen::Index a = 1; a < d; ++a) {
    Vector e = Vector::Unit(d, a);
    for (Eigen::Index b = 0; b < a; ++b) {
      e -= out.frame.col(b) * out.frame.col(b).dot(g * e);
    }
    const double norm = std::sqrt(e.dot(g * e));
    if (!(norm > 0.0)) throw NotPositiveDefinite("degenerate frame");
    out.frame.col(a) = e / norm;
  }
  return out;
}

Vector to_frame(const FramePoint& frame, const Vector& v) {
  const double x = frame.point.at(0);
  if (!(x > 0.0)) throw BoundaryEvaluation("coordinate vectors have no frame form at x = 0");
  Vector c = frame.frame.partialPivLu().solve(v / x);
  c(0) *= kReportedNormalSign;
  return c;
}

Vector from_frame(const FramePoint& frame, const Vector& coefficients) {
  Vector c = coefficients;
  c(0) *= kReportedNormalSign;
  return frame.point.at(0) * (frame.frame * c);
}

// ---------------------------------------------------------------------------

namespace {

// cosh(sqrt(w)) and sinh(sqrt(w))/sqrt(w) as power series in w.
template <class T>
void hyperbolic_series(const T& w, T& c, T& s) {
  constexpr int kTerms = 24;
  double cc[kTerms];
  double sc[kTerms];
  double f = 1.0;
  for (int j = 0; j < kTerms; ++j) {
    if (j > 0) f *= (2.0 * j - 1.0) * (2.0 * j);
    cc[j] = 1.0 / f;
    sc[j] = 1.0 / (f * (2.0 * j + 1.0));
  }
  c = w * 0.0 + cc[kTerms - 1];
  s = w * 0.0 + sc[kTerms - 1];
  for (int j = kTerms - 2; j >= 0; --j) {
    c = c * w + cc[j];
    s = s * w + sc[j];
  }
}

double value_of(double v) { return v; }
double value_of(const TaylorJet& v) { return v.value(); }

template <class T>
std::vector<T> exp_map_impl(std::span<const T> p, std::span<const T> v) {
  const std::size_t d = p.size();
  if (v.size() != d) throw ShapeMismatch("tangent vector size does not match the point");
  if (!(value_of(p[0]) > 0.0)) throw BoundaryEvaluation("exp_map needs an interior point");

  T speed2 = v[0] * v[0];
  for (std::size_t i = 1; i < d; ++i) speed2 = speed2 + v[i] * v[i];
  const T w = speed2 / (p[0] * p[0]);

  T c;
  T s;
  if (value_of(w) <= 1.0) {
    hyperbolic_series(w, c, s);
  } else {
    T r;
    if constexpr (std::is_same_v<T, double>) {
      r = std::sqrt(w);
    } else {
      r = sqrt(w);
    }
    if constexpr (std::is_same_v<T, double>) {
      c = std::cosh(r);
      s = std::sinh(r) / r;
    } else {
      const T e = exp(r);
      const T ei = reciprocal(e);
      c = (e + ei) * 0.5;
      s = (e - ei) * 0.5 / r;
    }
  }

  const T denom = c - (v[0] / p[0]) * s;
  std::vector<T> out;
  out.reserve(d);
  out.push_back(p[0] / denom);
  for (std::size_t i = 1; i < d; ++i) out.push_back(p[i] + v[i] * s / denom);
  return out;
}

}  // namespace

std::vector<double> exp_map(const HalfSpaceModel& H, std::span<const double> p,
                            std::span<const double> v) {
  if (p.size() != H.dim()) throw ShapeMismatch("point dimension does not match the half-space");
  return exp_map_impl<double>(p, v);
}

std::vector<TaylorJet> exp_map(const HalfSpaceModel& H, std::span<const TaylorJet> p,
                               std::span<const TaylorJet> v) {
  if (p.size() != H.dim()) throw ShapeMismatch("point dimension does not match the half-space");
  return exp_map_impl<TaylorJet>(p, v);
}

double half_space_distance(const HalfSpaceModel& H, std::span<const double> p,
                           std::span<const double> q) {
  if (p.size() != H.dim() || q.size() != H.dim()) throw ShapeMismatch("point dimension mismatch");
  double d2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d2 += (p[i] - q[i]) * (p[i] - q[i]);
  // acosh(1 + t) evaluated as log1p(t + sqrt(t (t + 2))) to keep short distances accurate
  const double t = d2 / (2.0 * p[0] * q[0]);
  return std::log1p(t + std::sqrt(t * (t + 2.0))) / H.scale();
}

// ---------------------------------------------------------------------------

double richardson(std::span<const double> samples, int first_power) {
  if (samples.empty()) throw PreconditionError("Richardson needs at least one sample");
  std::vector<double> row(samples.begin(), samples.end());
  for (std::size_t k = 1; k < row.size(); ++k) {
    const double f = std::ldexp(1.0, first_power + static_cast<int>(k) - 1) - 1.0;
    for (std::size_t i = row.size() - 1; i >= k; --i) {
      row[i] = row[i] + (row[i] - row[i - 1]) / f;
    }
  }
  return row.back();
}

Vector richardson(std::span<const Vector> samples, int first_power) {
  if (samples.empty()) throw PreconditionError("Richardson needs at least one sample");
  std::vector<Vector> row(samples.begin(), samples.end());
  for (std::size_t k = 1; k < row.size(); ++k) {
    const double f = std::ldexp(1.0, first_power + static_cast<int>(k) - 1) - 1.0;
    for (std::size_t i = row.size() - 1; i >= k; --i) {
      row[i] = row[i] + (row[i] - row[i - 1]) / f;
    }
  }
  return row.back();
}

CurvatureProbe curvature_limit_probe(const ChartMetric& M, std::span<const double> boundary_y,
                                     std::size_t plane) {
  const std::size_t d = M.dim();
  if (d < 2) throw ShapeMismatch("curvature probe needs dimension >= 2");
  if (boundary_y.size() + 1 != d) throw ShapeMismatch("boundary point has the wrong size");
  if (plane == 0 || plane >= d) throw PreconditionError("probe plane index out of range");

  CurvatureProbe probe;
  std::vector<double> p(d);
  std::copy(boundary_y.begin(), boundary_y.end(), p.begin() + 1);
  p[0] = 0.0;
  const double a = anchor_scale(M, p);
  probe.expected = -a * a;

  const Vector v = Vector::Unit(static_cast<Eigen::Index>(d), 0);
  const Vector w = Vector::Unit(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(plane));
  for (int j = 4; j <= 12; ++j) {
    p[0] = std::ldexp(1.0, -j);
    probe.abscissae.push_back(p[0]);
    probe.curvatures.push_back(sectional_curvature(M, p, v, w));
  }

  const auto& k = probe.curvatures;
  std::vector<double> diffs;
  for (std::size_t i = 1; i < k.size(); ++i) diffs.push_back(std::abs(k[i] - k[i - 1]));
  const double scale = std::max(1.0, std::abs(k.back()));
  if (diffs.back() > diffs.front() && diffs.back() > 1e-9 * scale) {
    throw ExtrapolationDiverged("curvature samples do not settle along the ray");
  }
  // Differences at roundoff level carry no rate information.
  for (std::size_t i = diffs.size(); i-- > 1;) {
    if (diffs[i] > 1e-11 * scale && diffs[i - 1] > 1e-11 * scale) {
      probe.empirical_rate = std::log2(diffs[i - 1] / diffs[i]);
      break;
    }
  }
  probe.extrapolated = richardson(k, 1);
  return probe;
}

}  // namespace zeroform
