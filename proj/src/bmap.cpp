#include "zeroform/bmap.hpp"

#include <algorithm>
#include <cmath>

#include "zeroform/errors.hpp"

namespace zeroform {

void LinearModelMap::check() const {
  if (static_cast<std::size_t>(beta.size()) != n) {
    throw ShapeMismatch("beta must have n = " + std::to_string(n) + " entries");
  }
  if (static_cast<std::size_t>(lambda.rows()) != n || static_cast<std::size_t>(lambda.cols()) != m) {
    throw ShapeMismatch("lambda must be n x m = " + std::to_string(n) + " x " + std::to_string(m));
  }
  if (!(a > 0.0) || !(A > 0.0)) throw PreconditionError("scales a and A must be positive");
  if (!(gamma > 0.0)) throw PreconditionError("gamma must be positive");
  if (!beta.allFinite() || !lambda.allFinite() || !std::isfinite(a) || !std::isfinite(A) ||
      !std::isfinite(gamma)) {
    throw NonFiniteError("model map has non-finite entries");
  }
}

double LinearModelMap::sigma_sq() const { return beta.squaredNorm() + lambda.squaredNorm(); }

LinearModelMap make_model(std::size_t m, std::size_t n, double a, double A) {
  LinearModelMap v;
  v.m = m;
  v.n = n;
  v.a = a;
  v.A = A;
  v.beta = Vector::Zero(static_cast<Eigen::Index>(n));
  v.lambda = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  return v;
}

BMapSpec BMapSpec::model(const LinearModelMap& v) {
  v.check();
  BMapSpec spec;
  spec.source_ = HalfSpaceModel(v.m + 1, v.a).chart();
  spec.target_ = HalfSpaceModel(v.n + 1, v.A).chart();
  spec.model_ = v;
  return spec;
}

BMapSpec BMapSpec::expressions(ChartMetric source, ChartMetric target,
                               std::vector<Expr> components) {
  if (components.size() != target.dim()) {
    throw ShapeMismatch("map has " + std::to_string(components.size()) +
                        " components, target dimension is " + std::to_string(target.dim()));
  }
  for (const auto& c : components) {
    if (c.arity() > source.dim()) throw ShapeMismatch("map component uses an undeclared coordinate");
  }
  BMapSpec spec;
  spec.source_ = std::move(source);
  spec.target_ = std::move(target);
  spec.components_ = std::move(components);
  return spec;
}

std::vector<TaylorJet> BMapSpec::jets_at(std::span<const double> p, int order) const {
  if (p.size() != source_dim()) throw ShapeMismatch("point dimension does not match the source");
  std::vector<TaylorJet> out;
  out.reserve(target_dim());
  if (model_) {
    const auto coords = coordinate_jets(p, order);
    const auto& v = *model_;
    out.push_back(coords[0] * v.gamma);
    for (std::size_t i = 0; i < v.n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      TaylorJet c = coords[0] * v.beta(ii);
      for (std::size_t j = 0; j < v.m; ++j) c += coords[j + 1] * v.lambda(ii, static_cast<Eigen::Index>(j));
      out.push_back(std::move(c));
    }
    return out;
  }
  for (const auto& e : components_) out.push_back(eval_jet(e, p, order));
  return out;
}

std::vector<double> BMapSpec::value_at(std::span<const double> p) const {
  if (p.size() != source_dim()) throw ShapeMismatch("point dimension does not match the source");
  std::vector<double> out;
  if (model_) {
    for (const auto& j : jets_at(p, 0)) out.push_back(j.value());
    return out;
  }
  for (const auto& e : components_) out.push_back(evaluate(e, p));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> default_validation_samples(std::size_t source_dim) {
  const std::size_t m = source_dim - 1;
  const double ys[] = {-0.5, 0.0, 0.5};
  const double xs[] = {0.125, 0.25, 0.5};
  std::size_t count = 1;
  for (std::size_t i = 0; i < m; ++i) count *= 3;

  std::vector<std::vector<double>> out;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t xcount = pass == 0 ? 1 : 3;
    for (std::size_t xi = 0; xi < xcount; ++xi) {
      for (std::size_t idx = 0; idx < count; ++idx) {
        std::vector<double> p(source_dim, 0.0);
        p[0] = pass == 0 ? 0.0 : xs[xi];
        std::size_t rest = idx;
        for (std::size_t k = 0; k < m; ++k) {
          p[k + 1] = ys[rest % 3];
          rest /= 3;
        }
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

ValidationReport validate(const BMapSpec& u, std::span<const std::vector<double>> samples,
                          double tol) {
  std::vector<std::vector<double>> defaults;
  if (samples.empty()) {
    defaults = default_validation_samples(u.source_dim());
    samples = defaults;
  }
  ValidationReport report;
  for (const auto& p : samples) {
    if (p.size() != u.source_dim()) throw ShapeMismatch("validation sample has the wrong dimension");
    if (p[0] < 0.0) throw PreconditionError("validation sample outside the chart (x < 0)");
    if (p[0] == 0.0) {
      ++report.boundary_samples;
      const auto jets = u.jets_at(p, 1);
      const double value = jets[0].value();
      if (std::abs(value) > tol) report.failures.push_back({p, "boundary_to_boundary", value});
      const double normal = jets[0].d(0);
      if (!(normal > tol)) report.failures.push_back({p, "transversal", normal});
    } else {
      ++report.interior_samples;
      const double value = u.value_at(p)[0];
      if (!(value > 0.0)) report.failures.push_back({p, "interior_to_interior", value});
    }
  }
  report.ok = report.failures.empty();
  return report;
}

// ---------------------------------------------------------------------------

namespace {

Matrix flip_normal(Matrix d) {
  d.row(0) *= kReportedNormalSign;
  d.col(0) *= kReportedNormalSign;
  return d;
}

}  // namespace

Matrix zero_differential(const BMapSpec& u, std::span<const double> p) {
  const auto jets = u.jets_at(p, 1);
  std::vector<double> q;
  for (const auto& j : jets) q.push_back(j.value());

  const auto rows = static_cast<Eigen::Index>(u.target_dim());
  const auto cols = static_cast<Eigen::Index>(u.source_dim());
  Matrix jac(rows, cols);
  for (Eigen::Index g = 0; g < rows; ++g) {
    for (Eigen::Index i = 0; i < cols; ++i) {
      jac(g, i) = jets[static_cast<std::size_t>(g)].d(static_cast<std::size_t>(i));
    }
  }

  // du(x d_i) = (x / X) d_i u^g (X d_g); on the boundary x / X -> 1 / d_x u^0.
  double factor = 0.0;
  if (p[0] > 0.0) {
    if (!(q[0] > 0.0)) throw PreconditionError("map sends an interior point to the boundary");
    factor = p[0] / q[0];
  } else if (p[0] == 0.0) {
    if (std::abs(q[0]) > 1e-12) throw PreconditionError("map does not send this boundary point to the boundary");
    if (!(jac(0, 0) > 0.0)) throw PreconditionError("map is not transversal at this boundary point");
    q[0] = 0.0;
    factor = 1.0 / jac(0, 0);
  } else {
    throw PreconditionError("point outside the chart (x < 0)");
  }

  const FramePoint fs = frame_at(u.source(), p);
  const FramePoint ft = frame_at(u.target(), q);
  const Matrix d = ft.frame.partialPivLu().solve(factor * jac * fs.frame);
  return flip_normal(d);
}

double energy_density(const BMapSpec& u, std::span<const double> p) {
  return zero_differential(u, p).squaredNorm();
}

std::vector<TaylorJet> pulled_back_christoffel(const ChartMetric& target,
                                               std::span<const TaylorJet> u, int order) {
  const std::size_t n = target.dim();
  if (u.size() != n) throw ShapeMismatch("map jets do not match the target dimension");
  std::vector<double> q;
  for (const auto& j : u) q.push_back(j.value());
  const LocalGeometry geo = local_geometry(target, q, order);
  const std::size_t vars = u.empty() ? 0 : u[0].num_vars();
  const int out_order = std::min(order, u.empty() ? order : u[0].order());

  std::vector<TaylorJet> out(n * n * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const TaylorJet& g = geo.christoffel[(k * n + i) * n + j];
        TaylorJet c;
        const auto cs = g.coefficients();
        if (std::all_of(cs.begin(), cs.end(), [](double v) { return v == 0.0; })) {
          c = TaylorJet(vars, out_order);
        } else if (out_order == 0) {
          c = TaylorJet::constant(vars, 0, g.value());
        } else {
          c = compose(g, u);
        }
        out[(k * n + i) * n + j] = c;
        out[(k * n + j) * n + i] = std::move(c);
      }
    }
  }
  return out;
}

std::vector<TaylorJet> tension_jets(const BMapSpec& spec, std::span<const double> p,
                                    std::span<const TaylorJet> u) {
  if (u.size() != spec.target_dim()) throw ShapeMismatch("map jets do not match the target");
  const int k = u[0].order();
  if (k < 2) throw PreconditionError("tension needs map jets of order >= 2");
  const int r = k - 2;
  const std::size_t m = spec.source_dim();
  const std::size_t n = spec.target_dim();

  const LocalGeometry src = local_geometry(spec.source(), p, r);
  const auto tgt = pulled_back_christoffel(spec.target(), u, r);

  // du[g][i] = d_i u^g, order r + 1
  std::vector<TaylorJet> du(n * m);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t i = 0; i < m; ++i) du[g * m + i] = u[g].derivative(i);
  }
  std::vector<TaylorJet> du_r(n * m);
  for (std::size_t t = 0; t < du.size(); ++t) du_r[t] = du[t].truncated(r);

  std::vector<TaylorJet> ginv(m * m);
  for (std::size_t t = 0; t < ginv.size(); ++t) ginv[t] = src.inverse_metric[t].truncated(r);

  std::vector<TaylorJet> tau(n, TaylorJet(m, r));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const TaylorJet& gij = ginv[i * m + j];
      const auto cs = gij.coefficients();
      if (std::all_of(cs.begin(), cs.end(), [](double v) { return v == 0.0; })) continue;
      for (std::size_t g = 0; g < n; ++g) {
        TaylorJet h = du[g * m + i].derivative(j);
        for (std::size_t l = 0; l < m; ++l) {
          h -= src.christoffel[(l * m + i) * m + j] * du_r[g * m + l];
        }
        for (std::size_t al = 0; al < n; ++al) {
          for (std::size_t be = 0; be < n; ++be) {
            const TaylorJet& c = tgt[(g * n + al) * n + be];
            if (c.order() == 0 && c.value() == 0.0) continue;
            h += c * du_r[al * m + i] * du_r[be * m + j];
          }
        }
        tau[g] += gij * h;
      }
    }
  }
  return tau;
}

Vector tension(const BMapSpec& u, std::span<const double> p) {
  if (p.size() != u.source_dim()) throw ShapeMismatch("point dimension does not match the source");
  if (!(p[0] > 0.0)) throw BoundaryEvaluation("tension is evaluated at interior points");
  const auto jets = u.jets_at(p, 2);
  const auto tau = tension_jets(u, p, jets);
  std::vector<double> q;
  for (const auto& j : jets) q.push_back(j.value());
  Vector t(static_cast<Eigen::Index>(tau.size()));
  for (std::size_t g = 0; g < tau.size(); ++g) t(static_cast<Eigen::Index>(g)) = tau[g].value();
  return to_frame(frame_at(u.target(), q), t);
}

Vector tension_model(const LinearModelMap& v) {
  v.check();
  if (std::abs(v.gamma - 1.0) > 1e-12) throw PreconditionError("closed forms need gamma = 1");
  const double scale = v.a * v.a / v.A;
  Vector t(static_cast<Eigen::Index>(v.n + 1));
  t(0) = scale * (static_cast<double>(v.m) - v.sigma_sq());
  t.tail(static_cast<Eigen::Index>(v.n)) = -scale * static_cast<double>(v.m + 1) * v.beta;
  return t;
}

// ---------------------------------------------------------------------------

namespace {

// Flips column c of `m` (and of `partner`, if given) so that its first
// nonzero entry is positive.
void positive_first_entry(Matrix& m, Eigen::Index c, Matrix* partner = nullptr) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (std::abs(m(i, c)) > 1e-12) {
      if (m(i, c) < 0.0) {
        m.col(c) *= -1.0;
        if (partner) partner->col(c) *= -1.0;
      }
      return;
    }
  }
}

}  // namespace

BoundaryData boundary_data(const BMapSpec& u, std::span<const double> p, bool normalize) {
  if (p.size() != u.source_dim()) throw ShapeMismatch("point dimension does not match the source");
  if (p[0] != 0.0) throw PreconditionError("boundary data needs a boundary point (x = 0)");
  const auto jets = u.jets_at(p, 1);
  std::vector<double> q;
  for (const auto& j : jets) q.push_back(j.value());
  q[0] = 0.0;

  const Matrix d = zero_differential(u, p);
  const auto m = static_cast<Eigen::Index>(u.source_dim() - 1);
  const auto n = static_cast<Eigen::Index>(u.target_dim() - 1);

  BoundaryData out;
  out.point.assign(p.begin(), p.end());
  out.a = anchor_scale(u.source(), p);
  out.A = anchor_scale(u.target(), q);
  out.gamma = jets[0].d(0);

  // In frames the boundary differential is (a/A) [[1, 0], [-beta, lambda]] / gamma.
  const double unscale = out.A / out.a;
  Vector beta = -d.col(0).tail(n) * unscale;
  Matrix lambda = d.bottomRightCorner(n, m) * unscale;

  out.source_rotation = Matrix::Identity(m, m);
  out.target_rotation = Matrix::Identity(n, n);
  if (!normalize) {
    out.beta = beta * out.gamma;
    out.lambda = lambda * out.gamma;
    return out;
  }

  out.normalized = true;
  out.gamma = 1.0;
  if (n == 0) {
    out.beta = beta;
    out.lambda = lambda;
    return out;
  }

  Eigen::JacobiSVD<Matrix> svd(lambda, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix U = svd.matrixU();
  Matrix V = m > 0 ? svd.matrixV() : Matrix(0, 0);
  const Vector s = svd.singularValues();
  const Eigen::Index k = std::min(n, m);
  const double s0 = k > 0 ? s(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < k && s(rank) > 1e-12 * std::max(1.0, s0)) ++rank;

  for (Eigen::Index c = 0; c < rank; ++c) positive_first_entry(U, c, &V);

  // Rotate the null directions of lambda so that beta's component there lies
  // along the first of them.
  const Eigen::Index nulls = n - rank;
  double b_null = 0.0;
  if (nulls > 0) {
    Matrix N = U.rightCols(nulls);
    Vector c = N.transpose() * beta;
    b_null = c.norm();
    if (b_null > 1e-14) {
      Vector w = Vector::Unit(nulls, 0) - c / b_null;
      if (w.norm() > 1e-14) {
        Matrix H = Matrix::Identity(nulls, nulls) - 2.0 * w * w.transpose() / w.squaredNorm();
        N = N * H;
      }
    }
    for (Eigen::Index col = (b_null > 1e-14 ? 1 : 0); col < nulls; ++col) {
      positive_first_entry(N, col);
    }
    U.rightCols(nulls) = N;
  }
  for (Eigen::Index c = rank; c < m; ++c) positive_first_entry(V, c);

  out.target_rotation = U;
  if (m > 0) out.source_rotation = V;
  out.lambda = Matrix::Zero(n, m);
  for (Eigen::Index c = 0; c < rank; ++c) out.lambda(c, c) = s(c);
  out.beta = Vector::Zero(n);
  out.beta.head(rank) = U.leftCols(rank).transpose() * beta;
  if (nulls > 0) out.beta(rank) = b_null;
  return out;
}

LinearModelMap model_map_at(const BMapSpec& u, std::span<const double> p) {
  const BoundaryData bd = boundary_data(u, p, true);
  LinearModelMap v;
  v.m = u.source_dim() - 1;
  v.n = u.target_dim() - 1;
  v.a = bd.a;
  v.A = bd.A;
  v.gamma = 1.0;
  v.beta = bd.beta;
  v.lambda = bd.lambda;
  return v;
}

}  // namespace zeroform
