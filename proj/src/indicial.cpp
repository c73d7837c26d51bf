#include "zeroform/indicial.hpp"

#include <algorithm>
#include <cmath>

#include "zeroform/errors.hpp"
#include "zeroform/jacobi.hpp"

namespace zeroform {

Matrix MatrixPolynomial2::at(double z) const { return scale * (A2 * z * z + A1 * z + A0); }

Eigen::MatrixXcd MatrixPolynomial2::unscaled_at(std::complex<double> z) const {
  return A2.cast<std::complex<double>>() * (z * z) + A1.cast<std::complex<double>>() * z +
         A0.cast<std::complex<double>>();
}

double sigma_sq(const Vector& beta, const Matrix& lambda) {
  if (lambda.rows() != beta.size()) {
    throw ShapeMismatch("lambda has " + std::to_string(lambda.rows()) + " rows, beta has " +
                        std::to_string(beta.size()) + " entries");
  }
  return beta.squaredNorm() + lambda.squaredNorm();
}

namespace {

void require_unit_gamma(const LinearModelMap& v) {
  v.check();
  if (std::abs(v.gamma - 1.0) > 1e-12) throw PreconditionError("indicial data needs gamma = 1");
}

}  // namespace

MatrixPolynomial2 indicial_delta(const LinearModelMap& v) {
  require_unit_gamma(v);
  const auto n = static_cast<Eigen::Index>(v.n);
  const double m = static_cast<double>(v.m);
  const double s2 = sigma_sq(v.beta, v.lambda);

  MatrixPolynomial2 P;
  P.m = v.m;
  P.scale = v.a * v.a;
  P.A2 = -Matrix::Identity(n + 1, n + 1);
  P.A1 = m * Matrix::Identity(n + 1, n + 1);
  P.A1.block(0, 1, 1, n) = 2.0 * v.beta.transpose();
  P.A1.block(1, 0, n, 1) = -2.0 * v.beta;
  P.A0 = Matrix::Zero(n + 1, n + 1);
  P.A0(0, 0) = s2;
  P.A0.block(0, 1, 1, n) = -m * v.beta.transpose();
  P.A0.block(1, 0, n, 1) = m * v.beta;
  P.A0.block(1, 1, n, n) = v.beta * v.beta.transpose() + v.lambda * v.lambda.transpose();
  return P;
}

namespace {

// Curvature term without the a^2 factor.
Matrix curvature_block(const LinearModelMap& v) {
  require_unit_gamma(v);
  const auto n = static_cast<Eigen::Index>(v.n);
  const double s2 = sigma_sq(v.beta, v.lambda);
  Matrix C = s2 * Matrix::Identity(n + 1, n + 1);
  C.block(0, 1, 1, n) += v.beta.transpose();
  C.block(1, 0, n, 1) += v.beta;
  C.block(1, 1, n, n) += Matrix::Identity(n, n);
  C.block(1, 1, n, n) -= v.beta * v.beta.transpose() + v.lambda * v.lambda.transpose();
  return C;
}

}  // namespace

Matrix curvature_term(const LinearModelMap& v) { return v.a * v.a * curvature_block(v); }

MatrixPolynomial2 indicial_jacobi(const LinearModelMap& v) {
  MatrixPolynomial2 P = indicial_delta(v);
  P.A0 += curvature_block(v);
  return P;
}

// ---------------------------------------------------------------------------

OracleColumn conjugation_oracle(const LinearModelMap& v, double z, std::size_t index) {
  require_unit_gamma(v);
  if (index > v.n) throw ShapeMismatch("frame index out of range");
  const BMapSpec u = BMapSpec::model(v);
  const std::size_t n = v.n + 1;

  std::vector<Vector> lap;
  std::vector<Vector> curv;
  OracleColumn out;
  for (int j = 6; j <= 12; ++j) {
    std::vector<double> p(v.m + 1, 0.0);
    p[0] = std::ldexp(1.0, -j);
    const auto uj = u.jets_at(p, 2);
    std::vector<double> q;
    for (const auto& c : uj) q.push_back(c.value());
    const FramePoint ft = frame_at(u.target(), q);

    // Frame vectors are constant multiples of X d_X, X d_Y in the half-space.
    const Vector e = ft.reported().col(static_cast<Eigen::Index>(index));
    const TaylorJet xz = pow(TaylorJet::variable(v.m + 1, 2, 0, p[0]), z);
    std::vector<TaylorJet> W;
    for (std::size_t g = 0; g < n; ++g) W.push_back(xz * uj[0] * e(static_cast<Eigen::Index>(g)));

    const JacobiCoordinates jc = jacobi_coordinates(u, p, uj, W);
    const double undo = std::pow(p[0], -z);
    lap.push_back(undo * to_frame(ft, jc.laplacian));
    curv.push_back(undo * to_frame(ft, jc.curvature));
    out.samples.push_back(lap.back() + curv.back());
  }

  const auto& s = out.samples;
  const double first = (s[1] - s[0]).norm();
  const double last = (s[s.size() - 1] - s[s.size() - 2]).norm();
  const double size = std::max(1.0, s.back().norm());
  if (last > first && last > 1e-8 * size) {
    throw ExtrapolationDiverged("conjugated Jacobi samples do not settle as x -> 0");
  }
  out.laplacian = richardson(lap, 1);
  out.curvature = richardson(curv, 1);
  out.total = out.laplacian + out.curvature;
  return out;
}

OracleMatrix conjugation_oracle_matrix(const LinearModelMap& v, double z) {
  const auto n = static_cast<Eigen::Index>(v.n + 1);
  OracleMatrix out{Matrix(n, n), Matrix(n, n), Matrix(n, n)};
  for (Eigen::Index b = 0; b < n; ++b) {
    const OracleColumn c = conjugation_oracle(v, z, static_cast<std::size_t>(b));
    out.laplacian.col(b) = c.laplacian;
    out.curvature.col(b) = c.curvature;
    out.total.col(b) = c.total;
  }
  return out;
}

ZeroDeterminant det_at_zero(const LinearModelMap& v) {
  const MatrixPolynomial2 P = indicial_jacobi(v);
  const double m = static_cast<double>(v.m);
  const double bb = v.beta.squaredNorm();
  const double ll = v.lambda.squaredNorm();
  const double s2 = bb + ll;

  ZeroDeterminant out;
  out.scale = P.scale;
  out.direct = P.A0.fullPivLu().determinant();
  out.factored = (2.0 * s2 + (m + 1.0) * (m - 1.0) * bb / (1.0 + s2)) *
                 std::pow(1.0 + s2, static_cast<double>(v.n));
  out.scalar_identity = s2 + 2.0 * s2 * s2 + ll + m * m * bb;
  return out;
}

// ---------------------------------------------------------------------------

int IndicialSpectrum::total_multiplicity() const {
  int t = 0;
  for (const auto& r : roots) t += r.multiplicity;
  return t;
}

namespace {

using Complex = std::complex<double>;

bool root_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Newton on det P with multiplicity k: z <- z - k / tr(P^{-1} P').
Complex polish(const MatrixPolynomial2& P, Complex z, int k) {
  const Eigen::MatrixXcd A2 = P.A2.cast<Complex>();
  const Eigen::MatrixXcd A1 = P.A1.cast<Complex>();
  const Complex start = z;
  double last_step = INFINITY;
  for (int it = 0; it < 40; ++it) {
    const Eigen::MatrixXcd Pz = P.unscaled_at(z);
    const Eigen::MatrixXcd dP = 2.0 * z * A2 + A1;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Pz);
    const Complex trace = lu.solve(dP).trace();
    if (!std::isfinite(trace.real()) || !std::isfinite(trace.imag()) || std::abs(trace) == 0.0) {
      break;  // exactly singular: z is a root to working precision
    }
    const Complex step = static_cast<double>(k) / trace;
    if (!(std::abs(step) < last_step) && it > 2) break;
    last_step = std::abs(step);
    z -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  // A polish that wanders off means the cluster was not a single root.
  if (!(std::abs(z - start) < 1e-3 * std::max(1.0, std::abs(start)))) return start;
  return z;
}

}  // namespace

IndicialSpectrum indicial_roots(const MatrixPolynomial2& P) {
  const auto s = static_cast<Eigen::Index>(P.size());
  if (P.A2.rows() != s || P.A1.rows() != s || P.A2.cols() != s || P.A1.cols() != s ||
      P.A0.cols() != s) {
    throw ShapeMismatch("matrix polynomial coefficients disagree in size");
  }
  Eigen::FullPivLU<Matrix> lead(P.A2);
  if (!lead.isInvertible()) throw PreconditionError("leading coefficient is singular");

  Matrix L = Matrix::Zero(2 * s, 2 * s);
  L.block(0, s, s, s) = Matrix::Identity(s, s);
  L.block(s, 0, s, s) = -lead.solve(P.A0);
  L.block(s, s, s, s) = -lead.solve(P.A1);
  Eigen::EigenSolver<Matrix> solver(L, false);
  if (solver.info() != Eigen::Success) throw EigenSolverFailure("companion eigenvalue solve failed");

  std::vector<Complex> raw(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(raw.begin(), raw.end(), root_less);

  // Greedy grouping at 1e-6, then one multiplicity-aware polish per group.
  std::vector<std::vector<Complex>> groups;
  std::vector<bool> used(raw.size(), false);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    std::vector<Complex> g{raw[i]};
    used[i] = true;
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (!used[j] && std::abs(raw[j] - raw[i]) <= 1e-6 * std::max(1.0, std::abs(raw[i]))) {
        g.push_back(raw[j]);
        used[j] = true;
      }
    }
    groups.push_back(std::move(g));
  }

  IndicialSpectrum out;
  for (const auto& g : groups) {
    Complex mean = 0.0;
    for (const auto& z : g) mean += z;
    mean /= static_cast<double>(g.size());
    Complex z = polish(P, mean, static_cast<int>(g.size()));
    if (std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z))) z = Complex(z.real(), 0.0);
    out.roots.push_back({z, static_cast<int>(g.size())});
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const IndicialRoot& a, const IndicialRoot& b) { return root_less(a.value, b.value); });

  const double m = static_cast<double>(P.m);
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    const Complex mirror = m - out.roots[i].value;
    std::size_t best = 0;
    double dist = INFINITY;
    for (std::size_t j = 0; j < out.roots.size(); ++j) {
      const double d = std::abs(out.roots[j].value - mirror);
      if (d < dist) {
        dist = d;
        best = j;
      }
    }
    if (out.roots[best].multiplicity != out.roots[i].multiplicity) dist = INFINITY;
    out.symmetry.push_back({i, best, dist});
    out.symmetry_deviation = std::max(out.symmetry_deviation, dist);
  }
  out.symmetry_ok = out.symmetry_deviation <= 1e-8;
  return out;
}

std::array<double, 4> harmonic_roots(std::size_t m) {
  const double md = static_cast<double>(m);
  const double r = std::sqrt(md * md + 8.0 * md) / 2.0;
  return {md / 2.0 + r, md / 2.0 - r, -1.0, md + 1.0};
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Harmonic: return "Harmonic";
    case Classification::ProperBiharmonic: return "ProperBiharmonic";
    case Classification::NotBiharmonic: return "NotBiharmonic";
  }
  return "?";
}

ModelClassification classify_model(const LinearModelMap& v, double tol) {
  require_unit_gamma(v);
  ModelClassification out;
  out.tension_norm = tension_model(v).norm();
  out.bitension_norm = model_bitension(v).norm();

  const bool harmonic = v.beta.norm() <= tol &&
                        std::abs(v.lambda.squaredNorm() - static_cast<double>(v.m)) <= tol;
  if (harmonic) {
    out.classification = Classification::Harmonic;
  } else if (out.bitension_norm <= tol) {
    out.classification = Classification::ProperBiharmonic;
  } else {
    out.classification = Classification::NotBiharmonic;
  }

  out.spectrum = indicial_roots(indicial_jacobi(v));
  out.root_gap.upper = static_cast<double>(v.m) + 1.0;
  if (harmonic) {
    out.root_gap.checked = true;
    for (const auto& r : out.spectrum.roots) {
      const double re = r.value.real();
      if (re > out.root_gap.lower + kRootGapMargin && re < out.root_gap.upper - kRootGapMargin) {
        out.root_gap.clean = false;
      }
    }
  }
  return out;
}

}  // namespace zeroform
