#include "zeroform/jacobi.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "zeroform/errors.hpp"

namespace zeroform {

FieldAlongMap FieldAlongMap::expressions(std::vector<Expr> components) {
  FieldAlongMap W;
  W.kind_ = Kind::Expressions;
  W.components_ = std::move(components);
  return W;
}

FieldAlongMap FieldAlongMap::tension_of() {
  FieldAlongMap W;
  W.kind_ = Kind::Tension;
  return W;
}

FieldAlongMap FieldAlongMap::from_jets(JetSource source) {
  FieldAlongMap W;
  W.kind_ = Kind::Jets;
  W.source_ = std::move(source);
  return W;
}

std::vector<TaylorJet> FieldAlongMap::jets_at(const BMapSpec& u, std::span<const double> p,
                                              int order) const {
  std::vector<TaylorJet> out;
  switch (kind_) {
    case Kind::Expressions:
      if (components_.size() != u.target_dim()) {
        throw ShapeMismatch("field has " + std::to_string(components_.size()) +
                            " components, target dimension is " + std::to_string(u.target_dim()));
      }
      for (const auto& e : components_) {
        if (e.arity() > u.source_dim()) throw ShapeMismatch("field uses an undeclared coordinate");
        out.push_back(eval_jet(e, p, order));
      }
      return out;
    case Kind::Tension:
      return tension_jets(u, p, u.jets_at(p, order + 2));
    case Kind::Jets:
      out = source_(p, order);
      if (out.size() != u.target_dim()) throw ShapeMismatch("field jets do not match the target");
      return out;
  }
  return out;
}

namespace {

bool is_zero(const TaylorJet& j) {
  const auto c = j.coefficients();
  return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
}

std::vector<double> values(std::span<const TaylorJet> jets) {
  std::vector<double> out;
  out.reserve(jets.size());
  for (const auto& j : jets) out.push_back(j.value());
  return out;
}

}  // namespace

JacobiCoordinates jacobi_coordinates(const BMapSpec& spec, std::span<const double> p,
                                     std::span<const TaylorJet> u, std::span<const TaylorJet> W) {
  const std::size_t m = spec.source_dim();
  const std::size_t n = spec.target_dim();
  if (u.size() != n || W.size() != n) throw ShapeMismatch("jets do not match the target dimension");
  if (u[0].order() < 2 || W[0].order() < 2) {
    throw PreconditionError("the Jacobi operator needs jets of order >= 2");
  }

  const LocalGeometry src = local_geometry(spec.source(), p, 0);
  std::vector<TaylorJet> u2;
  for (const auto& j : u) u2.push_back(j.truncated(2));
  const auto G = pulled_back_christoffel(spec.target(), u2, 1);
  const auto q = values(u);
  const Riemann R = riemann(spec.target(), q);

  std::vector<TaylorJet> du(n * m);  // order 1
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t i = 0; i < m; ++i) du[g * m + i] = u2[g].derivative(i);
  }
  std::vector<TaylorJet> W1;
  for (const auto& w : W) W1.push_back(w.truncated(1));

  // nabla_j W, order 1
  std::vector<TaylorJet> nw(n * m);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t j = 0; j < m; ++j) {
      TaylorJet s = W[g].truncated(2).derivative(j);
      for (std::size_t al = 0; al < n; ++al) {
        for (std::size_t be = 0; be < n; ++be) {
          const TaylorJet& c = G[(g * n + al) * n + be];
          if (is_zero(c)) continue;
          s += c * du[al * m + j] * W1[be];
        }
      }
      nw[g * m + j] = std::move(s);
    }
  }

  JacobiCoordinates out;
  out.laplacian = Vector::Zero(static_cast<Eigen::Index>(n));
  out.curvature = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double gij = src.inverse_metric[i * m + j].value();
      if (gij == 0.0) continue;
      for (std::size_t g = 0; g < n; ++g) {
        double h = nw[g * m + j].d(i);
        for (std::size_t al = 0; al < n; ++al) {
          for (std::size_t be = 0; be < n; ++be) {
            h += G[(g * n + al) * n + be].value() * du[al * m + i].value() * nw[be * m + j].value();
          }
        }
        for (std::size_t l = 0; l < m; ++l) {
          h -= src.christoffel[(l * m + i) * m + j].value() * nw[g * m + l].value();
        }
        out.laplacian(static_cast<Eigen::Index>(g)) -= gij * h;

        double c = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
          for (std::size_t mu = 0; mu < n; ++mu) {
            for (std::size_t nu = 0; nu < n; ++nu) {
              c += R(g, s, mu, nu) * du[s * m + j].value() * du[mu * m + i].value() * W[nu].value();
            }
          }
        }
        out.curvature(static_cast<Eigen::Index>(g)) += gij * c;
      }
    }
  }
  return out;
}

JacobiResult jacobi_apply(const BMapSpec& u, const FieldAlongMap& W, std::span<const double> p) {
  if (p.size() != u.source_dim()) throw ShapeMismatch("point dimension does not match the source");
  if (!(p[0] > 0.0)) throw BoundaryEvaluation("the Jacobi operator is evaluated at interior points");
  const auto uj = u.jets_at(p, W.is_tension() ? 4 : 2);
  const auto wj = W.is_tension() ? tension_jets(u, p, uj) : W.jets_at(u, p, 2);
  const JacobiCoordinates c = jacobi_coordinates(u, p, uj, wj);
  const FramePoint ft = frame_at(u.target(), values(uj));
  JacobiResult out;
  out.laplacian = to_frame(ft, c.laplacian);
  out.curvature = to_frame(ft, c.curvature);
  out.total = to_frame(ft, c.laplacian + c.curvature);
  return out;
}

Vector bitension(const BMapSpec& u, std::span<const double> p) {
  return jacobi_apply(u, FieldAlongMap::tension_of(), p).total;
}

Vector bitension_fd(const BMapSpec& u, std::span<const double> p, double h) {
  if (p.size() != u.source_dim()) throw ShapeMismatch("point dimension does not match the source");
  if (!(p[0] > 2.0 * h)) throw BoundaryEvaluation("finite-difference stencil leaves the interior");
  const std::size_t m = u.source_dim();
  const std::size_t n = u.target_dim();

  auto tau_at = [&](std::span<const double> x) -> Vector {
    const auto jets = u.jets_at(x, 2);
    const auto t = tension_jets(u, x, jets);
    Vector v(static_cast<Eigen::Index>(n));
    for (std::size_t g = 0; g < n; ++g) v(static_cast<Eigen::Index>(g)) = t[g].value();
    return v;
  };
  auto shifted = [&](std::size_t i, double di, std::size_t j, double dj) {
    std::vector<double> x(p.begin(), p.end());
    x[i] += di;
    x[j] += dj;
    return tau_at(x);
  };

  const Vector f0 = tau_at(p);
  std::vector<Vector> first(m);
  std::vector<Vector> second(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vector fp1 = shifted(i, h, i, 0.0);
    const Vector fm1 = shifted(i, -h, i, 0.0);
    const Vector fp2 = shifted(i, 2 * h, i, 0.0);
    const Vector fm2 = shifted(i, -2 * h, i, 0.0);
    first[i] = (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h);
    second[i * m + i] = (16.0 * (fp1 + fm1) - (fp2 + fm2) - 30.0 * f0) / (12.0 * h * h);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      auto cross = [&](double s) {
        return (shifted(i, s, j, s) - shifted(i, s, j, -s) - shifted(i, -s, j, s) +
                shifted(i, -s, j, -s)) /
               (4.0 * s * s);
      };
      const Vector mixed = (4.0 * cross(h) - cross(2 * h)) / 3.0;
      second[i * m + j] = mixed;
      second[j * m + i] = mixed;
    }
  }

  // Assemble order-2 jets of tau from the stencils.
  const auto& layout = detail::jet_layout(m);
  std::vector<TaylorJet> tau(n, TaylorJet(m, 2));
  std::vector<int> alpha(m, 0);
  for (std::size_t g = 0; g < n; ++g) {
    const auto gg = static_cast<Eigen::Index>(g);
    auto c = tau[g].coefficients();
    c[0] = f0(gg);
    for (std::size_t i = 0; i < m; ++i) {
      std::fill(alpha.begin(), alpha.end(), 0);
      alpha[i] = 1;
      c[static_cast<std::size_t>(layout.index_of(alpha))] = first[i](gg);
      for (std::size_t j = i; j < m; ++j) {
        std::fill(alpha.begin(), alpha.end(), 0);
        ++alpha[i];
        ++alpha[j];
        const double f = i == j ? 0.5 : 1.0;
        c[static_cast<std::size_t>(layout.index_of(alpha))] = f * second[i * m + j](gg);
      }
    }
  }

  const auto uj = u.jets_at(p, 2);
  const JacobiCoordinates jc = jacobi_coordinates(u, p, uj, tau);
  return to_frame(frame_at(u.target(), values(uj)), jc.laplacian + jc.curvature);
}

Vector model_bitension(const LinearModelMap& v) {
  const Vector t = tension_model(v);
  const auto n = static_cast<Eigen::Index>(v.n);
  const double m = static_cast<double>(v.m);
  const double s2 = v.sigma_sq();
  Vector out(n + 1);
  out(0) = 2.0 * s2 * t(0) + (1.0 - m) * v.beta.dot(t.tail(n));
  out.tail(n) = (m + 1.0) * v.beta * t(0) + (1.0 + s2) * t.tail(n);
  return v.a * v.a * out;
}

ModelNorms model_norms(std::size_t m, std::size_t n, double a, double A, const double* beta,
                       const double* lambda) {
  constexpr std::size_t kMax = kMaxJetVars;
  if (m >= kMax || n >= kMax) throw ShapeMismatch("model dimensions too large");
  double bb = 0.0;
  for (std::size_t i = 0; i < n; ++i) bb += beta[i] * beta[i];
  double ll = 0.0;
  for (std::size_t i = 0; i < n * m; ++i) ll += lambda[i] * lambda[i];
  const double s2 = bb + ll;
  const double md = static_cast<double>(m);
  const double scale = a * a / A;

  std::array<double, kMax> t{};
  t[0] = scale * (md - s2);
  for (std::size_t i = 0; i < n; ++i) t[i + 1] = -scale * (md + 1.0) * beta[i];

  ModelNorms out;
  double tn = 0.0;
  for (std::size_t i = 0; i <= n; ++i) tn += t[i] * t[i];
  out.tension = std::sqrt(tn);

  double bt = 0.0;
  for (std::size_t i = 0; i < n; ++i) bt += beta[i] * t[i + 1];
  const double a2 = a * a;
  double b0 = a2 * (2.0 * s2 * t[0] + (1.0 - md) * bt);
  double bn = b0 * b0;
  for (std::size_t i = 0; i < n; ++i) {
    const double bi = a2 * ((md + 1.0) * beta[i] * t[0] + (1.0 + s2) * t[i + 1]);
    bn += bi * bi;
  }
  out.bitension = std::sqrt(bn);
  return out;
}

LinearizationReport linearization_check(const BMapSpec& u, const FieldAlongMap& W,
                                        std::span<const double> p, double h) {
  const auto scale = u.target().model_scale();
  if (!scale) throw TargetNotModel("linearization check needs a half-space target");
  if (!(p[0] > 0.0)) throw BoundaryEvaluation("linearization check needs an interior point");
  const HalfSpaceModel H(u.target_dim(), *scale);

  const auto uj = u.jets_at(p, 2);
  const auto wj = W.jets_at(u, p, 2);
  const std::size_t n = u.target_dim();

  auto tau_t = [&](double t) -> Vector {
    std::vector<TaylorJet> v;
    for (const auto& w : wj) v.push_back(w * t);
    const auto ut = exp_map(H, uj, v);
    const auto tj = tension_jets(u, p, ut);
    Vector out(static_cast<Eigen::Index>(n));
    for (std::size_t g = 0; g < n; ++g) out(static_cast<Eigen::Index>(g)) = tj[g].value();
    return out;
  };
  auto central = [&](double s) { return Vector((tau_t(s) - tau_t(-s)) / (2.0 * s)); };
  Vector deriv = (4.0 * central(h / 2.0) - central(h)) / 3.0;

  // Covariant derivative along t: add Gamma(u(p))(tau, W).
  const Vector tau0 = tau_t(0.0);
  const Christoffel G = christoffel(u.target(), values(uj));
  for (std::size_t g = 0; g < n; ++g) {
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) s += G(g, a, b) * tau0(static_cast<Eigen::Index>(a)) * wj[b].value();
    }
    deriv(static_cast<Eigen::Index>(g)) += s;
  }

  const JacobiCoordinates jc = jacobi_coordinates(u, p, uj, wj);
  const FramePoint ft = frame_at(u.target(), values(uj));

  LinearizationReport out;
  out.derivative = to_frame(ft, deriv);
  out.jacobi = to_frame(ft, jc.laplacian + jc.curvature);
  const double scale_norm = std::max(out.derivative.norm(), out.jacobi.norm());
  if (scale_norm < 1e-300) {
    out.discrepancy = 0.0;
  } else {
    out.discrepancy = (out.derivative - kLinearizationSign * out.jacobi).norm() / scale_norm;
  }
  return out;
}

}  // namespace zeroform
