#pragma once

// Indicial polynomials of the Jacobi operator of a model map: closed-form
// assembly, roots, and a numerical conjugation check.
//
// Matrices act on columns of target-frame coefficients (reported
// orientation): column b is the image of the b-th frame vector.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "zeroform/bmap.hpp"

namespace zeroform {

/// scale * (A2 z^2 + A1 z + A0).
struct MatrixPolynomial2 {
  std::size_t m = 0;  // source boundary dimension, centre of the root symmetry is m/2
  Matrix A2;
  Matrix A1;
  Matrix A0;
  double scale = 1.0;

  std::size_t size() const { return static_cast<std::size_t>(A0.rows()); }
  /// Includes the scale.
  Matrix at(double z) const;
  /// Without the scale.
  Eigen::MatrixXcd unscaled_at(std::complex<double> z) const;
};

double sigma_sq(const Vector& beta, const Matrix& lambda);

MatrixPolynomial2 indicial_delta(const LinearModelMap& v);
/// The z-independent curvature contribution, including the a^2 factor.
Matrix curvature_term(const LinearModelMap& v);
MatrixPolynomial2 indicial_jacobi(const LinearModelMap& v);

struct OracleColumn {
  Vector laplacian;
  Vector curvature;
  Vector total;
  std::vector<Vector> samples;  // total at x = 2^-6 ... 2^-12
};

/// Estimates column `index` of the indicial matrix at z by applying the
/// Jacobi operator to x^z E_index at x = 2^-j, y = 0, and extrapolating.
OracleColumn conjugation_oracle(const LinearModelMap& v, double z, std::size_t index);

/// Matrix assembled from oracle columns, including the a^2 factor.
struct OracleMatrix {
  Matrix laplacian;
  Matrix curvature;
  Matrix total;
};
OracleMatrix conjugation_oracle_matrix(const LinearModelMap& v, double z);

struct ZeroDeterminant {
  double direct = 0.0;    // det of the constant coefficient, without a^2
  double factored = 0.0;  // closed factored form
  double scalar_identity = 0.0;  // sigma^2 + 2 sigma^4 + |lambda|^2 + m^2 |beta|^2
  double scale = 1.0;     // a^2, reported separately
};
ZeroDeterminant det_at_zero(const LinearModelMap& v);

struct IndicialRoot {
  std::complex<double> value;
  int multiplicity = 1;
};

struct SymmetryPair {
  std::size_t root = 0;
  std::size_t partner = 0;
  double deviation = 0.0;
};

struct IndicialSpectrum {
  std::vector<IndicialRoot> roots;  // sorted by real, then imaginary part
  std::vector<SymmetryPair> symmetry;
  double symmetry_deviation = 0.0;
  bool symmetry_ok = true;

  int total_multiplicity() const;
};

/// Companion eigenvalues, grouped at 1e-6 and Newton-polished on det P.
IndicialSpectrum indicial_roots(const MatrixPolynomial2& P);

/// (alpha+, alpha-, beta-, beta+) = (m/2 + r, m/2 - r, -1, m + 1) with
/// r = sqrt(m^2 + 8m) / 2.
std::array<double, 4> harmonic_roots(std::size_t m);

enum class Classification { Harmonic, ProperBiharmonic, NotBiharmonic };
const char* to_string(Classification c);

struct RootGap {
  double lower = -1.0;
  double upper = 0.0;
  bool checked = false;  // only asserted for harmonic models
  bool clean = true;
};

struct ModelClassification {
  Classification classification = Classification::NotBiharmonic;
  double tension_norm = 0.0;
  double bitension_norm = 0.0;
  IndicialSpectrum spectrum;
  RootGap root_gap;
};

inline constexpr double kRootGapMargin = 1e-6;

ModelClassification classify_model(const LinearModelMap& v, double tol = 1e-9);

}  // namespace zeroform
