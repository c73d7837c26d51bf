#pragma once

// Multivariate truncated Taylor jets.
//
// A TaylorJet of order k in d variables stores the coefficients
// c_alpha = (d^alpha f)(p) / alpha! for every multi-index |alpha| <= k, laid
// out densely in graded-lexicographic order. Because the layout is graded, the
// table for order k' < k is a prefix of the table for order k, so truncation
// is a resize.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace zeroform {

inline constexpr int kMaxJetOrder = 4;
inline constexpr std::size_t kMaxJetVars = 8;

namespace detail {

struct JetLayout {
  struct Product {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };

  std::size_t vars = 0;
  std::size_t count = 0;  // monomials of degree <= kMaxJetOrder
  std::vector<std::uint8_t> exponents;  // count * vars
  std::vector<std::uint8_t> degree;     // per monomial
  // size_by_order[k] = number of monomials of degree <= k.
  std::array<std::size_t, kMaxJetOrder + 1> size_by_order{};
  // products sorted by output index; products_by_order[k] = how many of them
  // land in a monomial of degree <= k.
  std::vector<Product> products;
  std::array<std::size_t, kMaxJetOrder + 1> products_by_order{};
  // raise[i * count + idx] = index of alpha + e_i, or -1 past the max order.
  std::vector<std::int32_t> raise;

  std::size_t size(int order) const { return size_by_order[order]; }
  std::int64_t index_of(std::span<const int> alpha) const;
};

const JetLayout& jet_layout(std::size_t vars);

}  // namespace detail

/// Number of coefficients of an order-k jet in d variables, C(d+k, k).
std::size_t jet_size(std::size_t vars, int order);

class TaylorJet {
 public:
  TaylorJet() = default;
  /// The zero jet.
  TaylorJet(std::size_t vars, int order);

  static TaylorJet constant(std::size_t vars, int order, double value);
  /// The coordinate function t_i expanded about base value `base`.
  static TaylorJet variable(std::size_t vars, int order, std::size_t index,
                            double base);

  std::size_t num_vars() const { return vars_; }
  int order() const { return order_; }
  double value() const { return coeffs_.empty() ? 0.0 : coeffs_[0]; }

  std::span<const double> coefficients() const { return coeffs_; }
  std::span<double> coefficients() { return coeffs_; }

  /// Stored coefficient d^alpha f / alpha!.
  double coeff(std::span<const int> alpha) const;
  /// The partial derivative d^alpha f at the base point.
  double partial(std::span<const int> alpha) const;
  /// Convenience: first partial in variable i.
  double d(std::size_t i) const;
  /// Convenience: second partial in variables i, j.
  double d2(std::size_t i, std::size_t j) const;

  /// Jet of the partial derivative in variable i; one order lower.
  TaylorJet derivative(std::size_t i) const;
  TaylorJet truncated(int order) const;

  /// Sum_j series[j] * (f - f(p))^j, truncated at this jet's order.
  TaylorJet compose_series(std::span<const double> series) const;

  bool all_finite() const;

  TaylorJet& operator+=(const TaylorJet& other);
  TaylorJet& operator-=(const TaylorJet& other);
  TaylorJet& operator*=(const TaylorJet& other);
  TaylorJet& operator/=(const TaylorJet& other);
  TaylorJet& operator+=(double s);
  TaylorJet& operator-=(double s);
  TaylorJet& operator*=(double s);
  TaylorJet& operator/=(double s);

  friend TaylorJet operator+(TaylorJet a, const TaylorJet& b) { return a += b; }
  friend TaylorJet operator-(TaylorJet a, const TaylorJet& b) { return a -= b; }
  friend TaylorJet operator*(const TaylorJet& a, const TaylorJet& b);
  friend TaylorJet operator/(const TaylorJet& a, const TaylorJet& b);
  friend TaylorJet operator+(TaylorJet a, double s) { return a += s; }
  friend TaylorJet operator+(double s, TaylorJet a) { return a += s; }
  friend TaylorJet operator-(TaylorJet a, double s) { return a -= s; }
  friend TaylorJet operator-(double s, const TaylorJet& a) { return -a + s; }
  friend TaylorJet operator*(TaylorJet a, double s) { return a *= s; }
  friend TaylorJet operator*(double s, TaylorJet a) { return a *= s; }
  friend TaylorJet operator/(TaylorJet a, double s) { return a /= s; }
  friend TaylorJet operator/(double s, const TaylorJet& a);
  friend TaylorJet operator-(TaylorJet a);

  /// Bitwise equality of shape and coefficients.
  friend bool operator==(const TaylorJet& a, const TaylorJet& b) = default;

 private:
  const detail::JetLayout& layout() const { return detail::jet_layout(vars_); }
  void match_order(const TaylorJet& other);

  std::size_t vars_ = 0;
  int order_ = 0;
  std::vector<double> coeffs_;
};

TaylorJet reciprocal(const TaylorJet& a);
TaylorJet exp(const TaylorJet& a);
TaylorJet log(const TaylorJet& a);
TaylorJet sqrt(const TaylorJet& a);
TaylorJet sin(const TaylorJet& a);
TaylorJet cos(const TaylorJet& a);
TaylorJet tanh(const TaylorJet& a);
TaylorJet atan(const TaylorJet& a);
/// Integer power by repeated truncated multiplication (reciprocal if n < 0).
TaylorJet pow(const TaylorJet& a, int n);
/// Real power; integral exponents defer to the integer overload, otherwise
/// the base value must be positive.
TaylorJet pow(const TaylorJet& a, double p);

/// f o g, where f is a jet in g.size() variables expanded about the values of
/// g, and every g[i] is a jet in the same (source) variables. The result has
/// the smaller of the two orders.
TaylorJet compose(const TaylorJet& f, std::span<const TaylorJet> g);

/// Coordinate jets t_i about `base`, one per variable.
std::vector<TaylorJet> coordinate_jets(std::span<const double> base, int order);

}  // namespace zeroform
