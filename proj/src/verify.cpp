#include "zeroform/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include "zeroform/errors.hpp"
#include "zeroform/jacobi.hpp"
#include "zeroform/random.hpp"
#include "zeroform/sweep.hpp"

namespace zeroform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using ItemCheck = std::function<double(Rng&, std::size_t)>;

/// Runs `count` independent items and reduces their errors in index order.
/// An item that throws counts as an infinite error.
CheckResult battery(const VerifyConfig& config, const std::string& key, const std::string& description,
                    std::size_t count, double tolerance, const ItemCheck& item) {
  std::vector<double> errors(count, 0.0);
  parallel_for(count, config.jobs, [&](std::size_t i) {
    Rng rng = Rng::for_item(config.seed, key, i);
    try {
      errors[i] = item(rng, i);
    } catch (const std::exception&) {
      errors[i] = kInf;
    }
  });
  CheckResult r{key, description, true, count, 0.0, tolerance};
  for (double e : errors) {
    if (!(e <= tolerance)) r.pass = false;
    if (std::isnan(e)) e = kInf;
    r.max_error = std::max(r.max_error, e);
  }
  return r;
}

double rel_diff(const Matrix& got, const Matrix& want) {
  if (got.rows() != want.rows() || got.cols() != want.cols()) return kInf;
  if (got.size() == 0) return 0.0;
  return (got - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff());
}

double abs_diff(const Matrix& got, const Matrix& want) {
  if (got.rows() != want.rows() || got.cols() != want.cols()) return kInf;
  if (got.size() == 0) return 0.0;
  return (got - want).cwiseAbs().maxCoeff();
}

double flag(bool ok) { return ok ? 0.0 : kInf; }

std::vector<double> interior_point(Rng& rng, std::size_t m) {
  std::vector<double> p(m + 1);
  p[0] = rng.uniform(0.2, 1.5);
  for (std::size_t i = 1; i <= m; ++i) p[i] = rng.uniform(-1.0, 1.0);
  return p;
}

LinearModelMap harmonic_model(Rng& rng, std::size_t m, std::size_t n) {
  LinearModelMap v = random_model(rng, m, n);
  v.beta.setZero();
  const double norm = v.lambda.squaredNorm();
  if (m > 0) v.lambda *= std::sqrt(static_cast<double>(m) / norm);
  return v;
}

ChartMetric half_space(std::size_t dim, double scale) { return HalfSpaceModel(dim, scale).chart(); }

BMapSpec expression_map(std::size_t dim, const std::vector<std::string>& components) {
  const ChartMetric H = half_space(dim, 1.0);
  std::vector<Expr> exprs;
  for (const auto& c : components) exprs.push_back(parse(c, std::span<const std::string>(H.coords())));
  return BMapSpec::expressions(H, H, std::move(exprs));
}

// -- closed-form tension and harmonicity ------------------------------------

CheckResult tension_closed_form(const VerifyConfig& c) {
  return battery(c, "tension_closed_form",
                 "jet/Christoffel tension of random model maps equals the closed form",
                 c.random_models, 1e-9, [&](Rng& rng, std::size_t) {
                   const std::size_t m = rng.integer(0, c.max_dim);
                   const std::size_t n = rng.integer(1, c.max_dim);
                   const LinearModelMap v = random_model(rng, m, n);
                   const auto p = interior_point(rng, m);
                   return rel_diff(tension(BMapSpec::model(v), p), tension_model(v));
                 });
}

CheckResult harmonic_criterion(const VerifyConfig& c) {
  // Items alternate: harmonic by construction, then generic, then a small grid
  // point with beta = 0 and diagonal lambda.
  const double tol = 1e-12;
  return battery(c, "harmonic_criterion",
                 "closed-form tension vanishes exactly when beta = 0 and tr(lambda^T lambda) = m",
                 c.random_models, tol, [&](Rng& rng, std::size_t i) {
                   const std::size_t m = rng.integer(1, c.max_dim);
                   const std::size_t n = rng.integer(1, c.max_dim);
                   LinearModelMap v;
                   if (i % 3 == 0) {
                     v = harmonic_model(rng, m, n);
                   } else if (i % 3 == 1) {
                     v = random_model(rng, m, n);
                   } else {
                     v = make_model(m, n, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0));
                     for (std::size_t k = 0; k < std::min(m, n); ++k) {
                       const auto kk = static_cast<Eigen::Index>(k);
                       v.lambda(kk, kk) = 0.5 * static_cast<double>(rng.integer(0, 4)) - 1.0;
                     }
                     if (rng.uniform() < 0.5) v.beta(0) = 0.5;
                   }
                   const double t = tension_model(v).norm() * v.A / (v.a * v.a);
                   const double trace = v.lambda.squaredNorm();
                   const bool harmonic = v.beta.isZero(0.0) &&
                                         std::abs(trace - static_cast<double>(m)) <= tol * static_cast<double>(m);
                   if (harmonic) return t;
                   return flag(t > tol);
                 });
}

CheckResult proper_biharmonic_example(const VerifyConfig& c) {
  return battery(c, "proper_biharmonic_example",
                 "beta = 0, lambda = 0: |tension| = a^2 m / A and the bitension vanishes (closed form and jets)",
                 9, 1e-8, [&](Rng& rng, std::size_t i) {
                   const std::size_t m = 1 + i % 3;
                   const std::size_t n = 1 + i / 3;
                   const double a = rng.uniform(0.5, 2.0);
                   const double A = i % 2 == 0 ? 1.0 : rng.uniform(0.5, 2.0);
                   const LinearModelMap v = make_model(m, n, a, A);
                   const BMapSpec u = BMapSpec::model(v);
                   const auto p = interior_point(rng, m);
                   const double expected = a * a * static_cast<double>(m) / A;
                   double e = std::abs(tension_model(v).norm() - expected) / expected;
                   if (e > 1e-10) return kInf;
                   e = std::max(e, std::abs(tension(u, p).norm() - expected) / expected);
                   if (e > 1e-10) return kInf;
                   e = std::max(e, model_bitension(v).norm());
                   e = std::max(e, bitension(u, p).norm());
                   return e;
                 });
}

CheckResult model_tension_examples(const VerifyConfig& c) {
  std::vector<std::function<double()>> cases;
  cases.push_back([] {
    LinearModelMap v = make_model(1, 2, 2.0, 1.0);
    v.beta << 1.0, 0.0;
    v.lambda << 1.0, 0.0;
    Vector want(3);
    want << -4.0, -8.0, 0.0;
    return std::max(abs_diff(tension_model(v), want),
                    abs_diff(tension(BMapSpec::model(v), std::vector<double>{0.3, 0.2}), want) / 8.0);
  });
  cases.push_back([] {
    LinearModelMap v = make_model(1, 1, 1.0, 1.0);
    v.lambda << 1.0;
    return std::max(tension_model(v).norm(), tension(BMapSpec::model(v), std::vector<double>{0.6, -0.4}).norm());
  });
  cases.push_back([] {
    LinearModelMap v = make_model(0, 3, 1.5, 0.8);
    v.beta << 0.5, -1.0, 2.0;
    Vector want(4);
    want << -v.beta.squaredNorm(), -0.5, 1.0, -2.0;
    want *= 1.5 * 1.5 / 0.8;
    return std::max(rel_diff(tension_model(v), want), rel_diff(tension(BMapSpec::model(v), std::vector<double>{0.7}), want));
  });
  cases.push_back([] {
    const LinearModelMap v = make_model(0, 2, 1.3, 1.1);
    return std::max(tension_model(v).norm(), tension(BMapSpec::model(v), std::vector<double>{0.9}).norm());
  });
  return battery(c, "model_tension_examples",
                 "closed-form tension on worked examples, including m = 0 and the identity of H^2",
                 cases.size(), 1e-10, [&](Rng&, std::size_t i) { return cases[i](); });
}

CheckResult energy_density_closed_form(const VerifyConfig& c) {
  return battery(c, "energy_density_closed_form",
                 "energy density of model maps equals (a/A)^2 (1 + sigma^2); identity of H^{m+1} gives m + 1",
                 c.bitension_models, 1e-10, [&](Rng& rng, std::size_t i) {
                   const std::size_t m = rng.integer(1, c.max_dim);
                   if (i % 4 == 0) {
                     LinearModelMap id = make_model(m, m, 1.0, 1.0);
                     id.lambda.setIdentity();
                     const double e = energy_density(BMapSpec::model(id), interior_point(rng, m));
                     return std::abs(e - static_cast<double>(m + 1)) / static_cast<double>(m + 1);
                   }
                   const LinearModelMap v = random_model(rng, m, rng.integer(1, c.max_dim));
                   const double r = v.a / v.A;
                   const double want = r * r * (1.0 + v.sigma_sq());
                   return std::abs(energy_density(BMapSpec::model(v), interior_point(rng, m)) - want) / want;
                 });
}

CheckResult zero_differential_display(const VerifyConfig& c) {
  return battery(c, "zero_differential_display",
                 "frame matrix of the 0-differential of an m = 1, n = 2 model map",
                 20, 1e-12, [&](Rng& rng, std::size_t) {
                   const LinearModelMap v = random_model(rng, 1, 2);
                   Matrix want(3, 2);
                   want << 1.0, 0.0, -v.beta(0), v.lambda(0, 0), -v.beta(1), v.lambda(1, 0);
                   want *= v.a / v.A;
                   return rel_diff(zero_differential(BMapSpec::model(v), interior_point(rng, 1)), want);
                 });
}

// -- bitension and the Jacobi operator --------------------------------------

CheckResult bitension_closed_form(const VerifyConfig& c) {
  return battery(c, "bitension_closed_form",
                 "order-4 jet bitension of random model maps equals the closed form",
                 c.bitension_models, 1e-8, [&](Rng& rng, std::size_t) {
                   const std::size_t m = rng.integer(0, 3);
                   const std::size_t n = rng.integer(1, 3);
                   const LinearModelMap v = random_model(rng, m, n, 1.0);
                   const auto p = interior_point(rng, m);
                   return rel_diff(bitension(BMapSpec::model(v), p), model_bitension(v));
                 });
}

CheckResult bitension_fd_cross_check(const VerifyConfig& c) {
  return battery(c, "bitension_fd_cross_check",
                 "finite-difference bitension agrees with the jet bitension",
                 std::max<std::size_t>(1, c.bitension_models / 4), 1e-5, [&](Rng& rng, std::size_t) {
                   const std::size_t m = rng.integer(1, 2);
                   const LinearModelMap v = random_model(rng, m, rng.integer(1, 2), 1.0);
                   const BMapSpec u = BMapSpec::model(v);
                   const auto p = interior_point(rng, m);
                   return rel_diff(bitension_fd(u, p), bitension(u, p));
                 });
}

CheckResult jacobi_of_tension_beta0(const VerifyConfig& c) {
  return battery(c, "jacobi_of_tension_beta0",
                 "J_v applied to tau(v) vanishes for beta = 0, lambda = 0",
                 9, 1e-8, [&](Rng& rng, std::size_t i) {
                   const std::size_t m = 1 + i % 3;
                   const LinearModelMap v = make_model(m, 1 + i / 3, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0));
                   return jacobi_apply(BMapSpec::model(v), FieldAlongMap::tension_of(), interior_point(rng, m))
                       .total.norm();
                 });
}

CheckResult linearization_sign(const VerifyConfig& c) {
  const std::vector<std::vector<std::string>> fields = {
      {"x*sin(y1) + x^2", "exp(x)*y1"},
      {"x*y1", "x^2 - y1"},
      {"cos(y1)*x", "x*tanh(y1)"},
  };
  return battery(c, "linearization_sign",
                 "J_u W matches the derivative of the tension along exponential variations",
                 fields.size() * 2, 1e-6, [&](Rng& rng, std::size_t i) {
                   LinearModelMap v = make_model(1, 1, 1.0, rng.uniform(0.5, 2.0));
                   v.lambda(0, 0) = rng.uniform(0.5, 1.5);
                   v.beta(0) = i % 2 == 0 ? 0.0 : rng.uniform(-1.0, 1.0);
                   const BMapSpec u = BMapSpec::model(v);
                   const auto& f = fields[i / 2];
                   const std::vector<std::string> coords = {"x", "y1"};
                   const FieldAlongMap W = FieldAlongMap::expressions(
                       {parse(f[0], std::span<const std::string>(coords)), parse(f[1], std::span<const std::string>(coords))});
                   const auto r = linearization_check(u, W, interior_point(rng, 1));
                   return r.discrepancy / std::max(1.0, r.jacobi.norm());
                 });
}

// -- indicial operator ------------------------------------------------------

CheckResult zero_root_characterization(const VerifyConfig& c) {
  return battery(c, "zero_root_characterization",
                 "det I(J_v)(0) vanishes only at beta = 0, lambda = 0; factored form equals the direct determinant",
                 c.zero_root_draws + 1, 1e-10, [&](Rng& rng, std::size_t i) {
                   if (i == 0) {
                     const ZeroDeterminant d = det_at_zero(make_model(2, 3, 1.4, 0.7));
                     return std::max(std::abs(d.direct), std::abs(d.factored));
                   }
                   const LinearModelMap v = random_model(rng, rng.integer(1, c.max_dim), rng.integer(1, c.max_dim));
                   const ZeroDeterminant d = det_at_zero(v);
                   if (!(std::abs(d.direct) > 0.0)) return kInf;
                   return std::abs(d.factored - d.direct) / std::abs(d.direct);
                 });
}

CheckResult harmonic_indicial_roots(const VerifyConfig& c) {
  return battery(c, "harmonic_indicial_roots",
                 "harmonic models: roots m/2 +- sqrt(m^2+8m)/2, -1, m+1; symmetric about m/2; none inside (-1, m+1)",
                 8 * 3, 1e-8, [&](Rng& rng, std::size_t i) {
                   const std::size_t m = 1 + i / 3;
                   const std::size_t n = i % 3 == 0 ? 1 : (i % 3 == 1 ? m : m + 1);
                   const LinearModelMap v = harmonic_model(rng, m, n);
                   const IndicialSpectrum s = indicial_roots(indicial_jacobi(v));
                   if (s.symmetry_deviation > 1e-8 || !s.symmetry_ok) return kInf;

                   const auto h = harmonic_roots(m);
                   std::vector<double> want = {h[0], h[1]};
                   for (std::size_t k = 0; k < n; ++k) {
                     want.push_back(h[2]);
                     want.push_back(h[3]);
                   }
                   std::vector<std::complex<double>> got;
                   for (const auto& r : s.roots) {
                     for (int k = 0; k < r.multiplicity; ++k) got.push_back(r.value);
                   }
                   if (got.size() != want.size()) return kInf;
                   std::sort(want.begin(), want.end());
                   std::sort(got.begin(), got.end(), [](auto x, auto y) { return x.real() < y.real(); });
                   double err = 0.0;
                   for (std::size_t k = 0; k < got.size(); ++k) err = std::max(err, std::abs(got[k] - want[k]));
                   if (err > 1e-10) return kInf;

                   const double mm = static_cast<double>(m);
                   for (const auto& r : s.roots) {
                     if (r.value.real() > -1.0 + kRootGapMargin && r.value.real() < mm + 1.0 - kRootGapMargin) return kInf;
                   }
                   return s.symmetry_deviation;
                 });
}

CheckResult root_count_and_symmetry(const VerifyConfig& c) {
  return battery(c, "root_count_and_symmetry",
                 "random models: 2(n+1) indicial roots with multiplicity, symmetric under z -> m - z",
                 c.positivity_models / 5, 1e-8, [&](Rng& rng, std::size_t) {
                   const std::size_t n = rng.integer(1, c.max_dim);
                   const LinearModelMap v = random_model(rng, rng.integer(1, c.max_dim), n);
                   const IndicialSpectrum s = indicial_roots(indicial_jacobi(v));
                   if (s.total_multiplicity() != static_cast<int>(2 * (n + 1))) return kInf;
                   return s.symmetry_deviation;
                 });
}

CheckResult conjugation_oracle_agreement(const VerifyConfig& c) {
  return battery(c, "conjugation_oracle_agreement",
                 "closed-form I(Delta), curvature term and I(J_v)(z) match the numerical conjugation oracle",
                 c.oracle_models, 1e-6, [&](Rng& rng, std::size_t) {
                   const std::size_t m = rng.integer(1, 3);
                   const LinearModelMap v = random_model(rng, m, rng.integer(1, 3));
                   const MatrixPolynomial2 delta = indicial_delta(v);
                   const MatrixPolynomial2 jac = indicial_jacobi(v);
                   const Matrix curv = curvature_term(v);
                   double err = 0.0;
                   for (double z : {-1.0, 0.0, 1.0, 2.0, 0.5 * static_cast<double>(m)}) {
                     const OracleMatrix o = conjugation_oracle_matrix(v, z);
                     err = std::max(err, rel_diff(o.laplacian, delta.at(z)));
                     err = std::max(err, rel_diff(o.curvature, curv));
                     err = std::max(err, rel_diff(o.total, jac.at(z)));
                   }
                   return err;
                 });
}

CheckResult curvature_term_positivity(const VerifyConfig& c) {
  return battery(c, "curvature_term_positivity",
                 "eigenvalues of the indicial curvature term are nonnegative",
                 c.positivity_models, 1e-12, [&](Rng& rng, std::size_t) {
                   const LinearModelMap v = random_model(rng, rng.integer(1, c.max_dim), rng.integer(1, c.max_dim));
                   const Matrix K = curvature_term(v);
                   if (rel_diff(K, K.transpose()) > 1e-14) return kInf;
                   const double lowest = Eigen::SelfAdjointEigenSolver<Matrix>(K).eigenvalues().minCoeff();
                   return std::max(0.0, -lowest);
                 });
}

CheckResult indicial_displays(const VerifyConfig& c) {
  std::vector<std::function<double()>> cases;
  cases.push_back([] {
    const MatrixPolynomial2 d = indicial_delta(make_model(2, 2, 1.0, 1.0));
    const Matrix I = Matrix::Identity(3, 3);
    return std::max({abs_diff(d.A2, -I), abs_diff(d.A1, 2.0 * I), abs_diff(d.A0, Matrix::Zero(3, 3))});
  });
  cases.push_back([] {
    const double a = 1.7;
    Matrix want = Matrix::Identity(4, 4) * a * a;
    want(0, 0) = 0.0;
    return rel_diff(curvature_term(make_model(2, 3, a, 0.9)), want);
  });
  for (std::size_t m = 1; m <= 4; ++m) {
    cases.push_back([m] {
      LinearModelMap v = make_model(m, 2, 1.0, 1.0);
      v.lambda.setZero();
      v.lambda(0, 0) = std::sqrt(static_cast<double>(m));
      const MatrixPolynomial2 P = indicial_jacobi(v);
      const double mm = static_cast<double>(m);
      double err = 0.0;
      for (double z : {-2.0, 0.0, 0.5, 3.0}) {
        Matrix want = Matrix::Identity(3, 3) * (-z * z + mm * z + 1.0 + mm);
        want(0, 0) = -z * z + mm * z + 2.0 * mm;
        err = std::max(err, rel_diff(P.at(z), want));
      }
      err = std::max(err, std::abs(P.at(mm + 1.0).determinant()));
      return err;
    });
  }
  cases.push_back([] {
    Matrix want = Matrix::Identity(3, 3);
    want(0, 0) = 0.0;
    return abs_diff(indicial_jacobi(make_model(2, 2, 1.0, 1.0)).at(0.0), want);
  });
  return battery(c, "indicial_displays",
                 "indicial matrices on worked examples: beta = 0, lambda = 0 and the harmonic reduction",
                 cases.size(), 1e-12, [&](Rng&, std::size_t i) { return cases[i](); });
}

CheckResult oracle_examples(const VerifyConfig& c) {
  return battery(c, "oracle_examples",
                 "conjugation oracle at z = 0 for beta = 0, lambda = 0 gives diag(0, I)",
                 3, 1e-6, [&](Rng&, std::size_t i) {
                   const std::size_t m = 1 + i;
                   const std::size_t n = 2;
                   Matrix want = Matrix::Identity(n + 1, n + 1);
                   want(0, 0) = 0.0;
                   return rel_diff(conjugation_oracle_matrix(make_model(m, n, 1.0, 1.0), 0.0).total, want);
                 });
}

CheckResult classify_examples(const VerifyConfig& c) {
  return battery(c, "classify_examples",
                 "classification: harmonic models with a clean root gap; beta = 0, lambda = 0 is proper biharmonic",
                 16, 0.0, [&](Rng& rng, std::size_t i) {
                   const std::size_t m = 1 + i % 4;
                   if (i < 8) {
                     const ModelClassification r = classify_model(harmonic_model(rng, m, rng.integer(1, 4)));
                     return flag(r.classification == Classification::Harmonic && r.root_gap.checked && r.root_gap.clean);
                   }
                   if (i < 12) {
                     const auto r = classify_model(make_model(m, 2, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)));
                     return flag(r.classification == Classification::ProperBiharmonic);
                   }
                   const auto r = classify_model(random_model(rng, m, 2));
                   return flag(r.classification == Classification::NotBiharmonic);
                 });
}

CheckResult biharmonic_implies_harmonic_grid(const VerifyConfig& c) {
  ModelGrid grid;
  grid.m = 2;
  grid.n = 2;
  grid.beta = {-c.grid_range, c.grid_range, c.grid_step};
  grid.lambda = grid.beta;
  const double tol = 1e-9;
  const GridSummary s = sweep_grid(
      grid, tol, c.jobs, [](const GridPoint&) { return false; }, [](const GridPoint&) {});
  CheckResult r{"biharmonic_implies_harmonic_grid",
                "m = n = 2 grid: every biharmonic point is harmonic or has beta = 0, lambda = 0",
                s.violations == 0 && s.proper_biharmonic == 1,
                s.points,
                static_cast<double>(s.violations),
                0.0};
  return r;
}

// -- geometry ---------------------------------------------------------------

CheckResult half_space_sectional_curvature(const VerifyConfig& c) {
  return battery(c, "half_space_sectional_curvature",
                 "sectional curvature of the rescaled half-space is -c^2 for random points and planes",
                 c.curvature_samples, 1e-10, [&](Rng& rng, std::size_t) {
                   const std::size_t k = rng.integer(1, c.max_dim);
                   const double scale = rng.uniform(0.5, 2.0);
                   const ChartMetric H = half_space(k + 1, scale);
                   const auto p = interior_point(rng, k);
                   Vector v(k + 1), w(k + 1);
                   for (std::size_t i = 0; i <= k; ++i) {
                     v(static_cast<Eigen::Index>(i)) = rng.uniform(-1.0, 1.0);
                     w(static_cast<Eigen::Index>(i)) = rng.uniform(-1.0, 1.0);
                   }
                   const double kappa = sectional_curvature(H, p, v, w);
                   return std::abs(kappa + scale * scale) / (scale * scale);
                 });
}

CheckResult curvature_limit(const VerifyConfig& c) {
  return battery(c, "curvature_limit_probe",
                 "sectional curvature of (1 + x^2/10) times the half-space metric extrapolates to -a_p^2 at the boundary",
                 1, 1e-4, [&](Rng&, std::size_t) {
                   const auto coords = default_coords(3);
                   const std::string f = "1 + x^2/10";
                   const ChartMetric M = ChartMetric::parse(coords, {{f, "0", "0"}, {"0", f, "0"}, {"0", "0", f}});
                   const std::vector<double> y = {0.3, -0.2};
                   const CurvatureProbe probe = curvature_limit_probe(M, y);
                   return std::max(std::abs(probe.extrapolated - probe.expected), std::abs(probe.expected + 1.0));
                 });
}

CheckResult expression_ball_factor(const VerifyConfig& c) {
  return battery(c, "expression_ball_factor",
                 "a ball-model conformal factor parsed from text evaluates to 4/(1-|y|^2)^2",
                 20, 1e-12, [&](Rng& rng, std::size_t) {
                   const std::vector<std::string> coords = {"y1", "y2"};
                   const std::string f = "4/(1 - (y1^2 + y2^2))^2";
                   const ChartMetric M = ChartMetric::parse(coords, {{f, "0"}, {"0", f}}, false);
                   const double r = rng.uniform(0.0, 0.9);
                   const double t = rng.uniform(0.0, 6.283185307179586);
                   const std::vector<double> p = {r * std::cos(t), r * std::sin(t)};
                   const double s = 1.0 - (p[0] * p[0] + p[1] * p[1]);
                   return rel_diff(metric_at(M, p), Matrix::Identity(2, 2) * (4.0 / (s * s)));
                 });
}

CheckResult model_frame_orientation(const VerifyConfig& c) {
  return battery(c, "model_frame_orientation",
                 "reported half-space frame has e_0 = -a x d_x, and is orthonormal",
                 10, 1e-12, [&](Rng& rng, std::size_t) {
                   const double a = rng.uniform(0.5, 2.0);
                   const ChartMetric H = half_space(2, a);
                   const FramePoint F = frame_at(H, interior_point(rng, 1));
                   Matrix want(2, 2);
                   want << -a, 0.0, 0.0, a;
                   const Matrix R = F.reported();
                   return std::max(std::abs(R(0, 0) - want(0, 0)), std::abs(R(1, 0)));
                 });
}

// -- boundary data ----------------------------------------------------------

CheckResult boundary_data_pipeline(const VerifyConfig& c) {
  std::vector<std::function<double()>> cases;
  cases.push_back([] {
    const BMapSpec u = expression_map(3, {"x*exp(x)", "y1 + x", "2*y2"});
    const BoundaryData b = boundary_data(u, std::vector<double>{0.0, 0.0, 0.0}, true);
    Vector beta(2);
    beta << 0.0, 1.0;
    Matrix lambda(2, 2);
    lambda << 2.0, 0.0, 0.0, 1.0;
    return std::max({std::abs(b.gamma - 1.0), abs_diff(b.beta, beta), abs_diff(b.lambda, lambda)});
  });
  cases.push_back([] {
    const BMapSpec u = expression_map(3, {"x", "0", "0"});
    const BoundaryData b = boundary_data(u, std::vector<double>{0.0, 0.4, -0.3}, true);
    return std::max({std::abs(b.gamma - 1.0), b.beta.cwiseAbs().maxCoeff(), b.lambda.cwiseAbs().maxCoeff()});
  });
  cases.push_back([] {
    // Identity on a non-model chart is isometric on the boundary.
    const auto coords = default_coords(3);
    const ChartMetric M = ChartMetric::parse(
        coords, {{"1 + y1^2", "0.3", "0"}, {"0.3", "2 + x", "0.1*y2"}, {"0", "0.1*y2", "1"}});
    std::vector<Expr> id;
    for (std::size_t i = 0; i < 3; ++i) id.push_back(Expr::variable(i, coords[i]));
    const BMapSpec u = BMapSpec::expressions(M, M, std::move(id));
    const LinearModelMap v = model_map_at(u, std::vector<double>{0.0, 0.5, 0.2});
    return std::abs(v.lambda.squaredNorm() - 2.0) + v.beta.norm();
  });
  return battery(c, "boundary_data_pipeline",
                 "boundary data of expression maps with hand-computed Jacobians, after normalization",
                 cases.size(), 1e-10, [&](Rng&, std::size_t i) { return cases[i](); });
}

CheckResult boundary_normalization_invariants(const VerifyConfig& c) {
  return battery(c, "boundary_normalization_invariants",
                 "normalizing model boundary data keeps |beta| and tr(lambda^T lambda) and diagonalizes lambda",
                 c.random_models / 5, 1e-12, [&](Rng& rng, std::size_t) {
                   const std::size_t m = rng.integer(1, c.max_dim);
                   const std::size_t n = rng.integer(1, c.max_dim);
                   const LinearModelMap v = random_model(rng, m, n);
                   std::vector<double> p(m + 1, 0.0);
                   for (std::size_t i = 1; i <= m; ++i) p[i] = rng.uniform(-1.0, 1.0);
                   const BoundaryData b = boundary_data(BMapSpec::model(v), p, true);
                   const double scale = std::max(1.0, v.sigma_sq());
                   double err = std::abs(b.lambda.squaredNorm() - v.lambda.squaredNorm()) / scale;
                   err = std::max(err, std::abs(b.beta.squaredNorm() - v.beta.squaredNorm()) / scale);
                   Matrix off = b.lambda;
                   for (Eigen::Index k = 0; k < std::min(off.rows(), off.cols()); ++k) {
                     if (k > 0 && b.lambda(k, k) > b.lambda(k - 1, k - 1)) return kInf;
                     off(k, k) = 0.0;
                   }
                   return std::max(err, off.cwiseAbs().maxCoeff() / scale);
                 });
}

CheckResult constant_boundary_map_data(const VerifyConfig& c) {
  return battery(c, "constant_boundary_map_data",
                 "model maps are their own boundary data: gamma = 1 and the singular values of lambda",
                 c.random_models / 5, 1e-12, [&](Rng& rng, std::size_t) {
                   const std::size_t m = rng.integer(1, c.max_dim);
                   const LinearModelMap v = random_model(rng, m, rng.integer(1, c.max_dim));
                   std::vector<double> p(m + 1, 0.0);
                   const BoundaryData b = boundary_data(BMapSpec::model(v), p, false);
                   double err = std::abs(b.gamma - 1.0);
                   err = std::max(err, rel_diff(b.beta, v.beta));
                   err = std::max(err, rel_diff(b.lambda, v.lambda));
                   return err;
                 });
}

}  // namespace

VerifyConfig verify_config_from_json(const io::Json& j) {
  VerifyConfig c;
  if (!j.is_object()) throw InputError("verify settings must be a JSON object");
  static const char* const known[] = {"seed",           "random_models",     "max_dim",
                                      "zero_root_draws", "oracle_models",     "positivity_models",
                                      "bitension_models", "curvature_samples", "grid_step",
                                      "grid_range"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known)) {
      throw InputError("unknown verify setting \"" + it.key() + "\"");
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw InputError("verify.seed must be a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  auto count = [&](const char* key, std::size_t& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_unsigned()) throw InputError(std::string("verify.") + key + " must be a nonnegative integer");
    out = j[key].get<std::size_t>();
  };
  auto real = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw InputError(std::string("verify.") + key + " must be a number");
    out = j[key].get<double>();
  };
  count("random_models", c.random_models);
  count("max_dim", c.max_dim);
  count("zero_root_draws", c.zero_root_draws);
  count("oracle_models", c.oracle_models);
  count("positivity_models", c.positivity_models);
  count("bitension_models", c.bitension_models);
  count("curvature_samples", c.curvature_samples);
  real("grid_step", c.grid_step);
  real("grid_range", c.grid_range);
  if (c.max_dim < 1 || c.max_dim + 1 > kMaxJetVars) throw InputError("verify.max_dim out of range");
  if (!(c.grid_step > 0.0) || !(c.grid_range >= 0.0)) throw InputError("verify grid needs step > 0 and range >= 0");
  return c;
}

std::vector<CheckResult> run_verify(const VerifyConfig& config) {
  using Check = CheckResult (*)(const VerifyConfig&);
  static const Check checks[] = {
      tension_closed_form,
      harmonic_criterion,
      proper_biharmonic_example,
      model_tension_examples,
      energy_density_closed_form,
      zero_differential_display,
      bitension_closed_form,
      bitension_fd_cross_check,
      jacobi_of_tension_beta0,
      linearization_sign,
      zero_root_characterization,
      harmonic_indicial_roots,
      root_count_and_symmetry,
      conjugation_oracle_agreement,
      curvature_term_positivity,
      indicial_displays,
      oracle_examples,
      classify_examples,
      biharmonic_implies_harmonic_grid,
      half_space_sectional_curvature,
      curvature_limit,
      expression_ball_factor,
      model_frame_orientation,
      boundary_data_pipeline,
      boundary_normalization_invariants,
      constant_boundary_map_data,
  };
  std::vector<CheckResult> out;
  for (Check check : checks) out.push_back(check(config));
  return out;
}

io::Json to_json(const std::vector<CheckResult>& checks, const VerifyConfig& config) {
  io::Json settings;
  settings["seed"] = config.seed;
  settings["random_models"] = config.random_models;
  settings["max_dim"] = config.max_dim;
  settings["zero_root_draws"] = config.zero_root_draws;
  settings["oracle_models"] = config.oracle_models;
  settings["positivity_models"] = config.positivity_models;
  settings["bitension_models"] = config.bitension_models;
  settings["curvature_samples"] = config.curvature_samples;
  settings["grid_step"] = config.grid_step;
  settings["grid_range"] = config.grid_range;

  io::Json list = io::Json::array();
  std::size_t passed = 0;
  for (const auto& c : checks) {
    io::Json e;
    e["key"] = c.key;
    e["pass"] = c.pass;
    e["cases"] = c.cases;
    e["max_error"] = c.max_error;
    e["tolerance"] = c.tolerance;
    e["description"] = c.description;
    list.push_back(std::move(e));
    if (c.pass) ++passed;
  }
  io::Json out;
  out["settings"] = std::move(settings);
  out["checks"] = std::move(list);
  out["passed"] = passed;
  out["failed"] = checks.size() - passed;
  out["ok"] = passed == checks.size();
  return out;
}

}  // namespace zeroform
