#include "zeroform/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "zeroform/errors.hpp"

namespace zeroform {
namespace detail {
namespace {

void enumerate_degree(std::size_t vars, int remaining, std::size_t slot,
                      std::vector<std::uint8_t>& current,
                      std::vector<std::uint8_t>& out) {
  if (slot + 1 == vars) {
    current[slot] = static_cast<std::uint8_t>(remaining);
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[slot] = static_cast<std::uint8_t>(e);
    enumerate_degree(vars, remaining - e, slot + 1, current, out);
  }
}

JetLayout build_layout(std::size_t vars) {
  JetLayout layout;
  layout.vars = vars;
  if (vars == 0) {
    layout.count = 1;
    layout.degree = {0};
    layout.size_by_order.fill(1);
    layout.products = {{0, 0, 0}};
    layout.products_by_order.fill(1);
    return layout;
  }

  std::vector<std::uint8_t> current(vars, 0);
  for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
    enumerate_degree(vars, deg, 0, current, layout.exponents);
    layout.count = layout.exponents.size() / vars;
    layout.size_by_order[deg] = layout.count;
    layout.degree.resize(layout.count, static_cast<std::uint8_t>(deg));
  }

  std::map<std::vector<std::uint8_t>, std::uint32_t> lookup;
  for (std::size_t idx = 0; idx < layout.count; ++idx) {
    auto first = layout.exponents.begin() + static_cast<std::ptrdiff_t>(idx * vars);
    lookup.emplace(std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(vars)),
                   static_cast<std::uint32_t>(idx));
  }

  std::vector<std::uint8_t> sum(vars);
  for (std::size_t i = 0; i < layout.count; ++i) {
    for (std::size_t j = 0; j < layout.count; ++j) {
      if (layout.degree[i] + layout.degree[j] > kMaxJetOrder) continue;
      for (std::size_t v = 0; v < vars; ++v) {
        sum[v] = static_cast<std::uint8_t>(layout.exponents[i * vars + v] +
                                           layout.exponents[j * vars + v]);
      }
      layout.products.push_back({static_cast<std::uint32_t>(i),
                                 static_cast<std::uint32_t>(j), lookup.at(sum)});
    }
  }
  std::sort(layout.products.begin(), layout.products.end(),
            [](const JetLayout::Product& a, const JetLayout::Product& b) {
              if (a.out != b.out) return a.out < b.out;
              if (a.lhs != b.lhs) return a.lhs < b.lhs;
              return a.rhs < b.rhs;
            });
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    auto limit = static_cast<std::uint32_t>(layout.size_by_order[k]);
    auto it = std::lower_bound(
        layout.products.begin(), layout.products.end(), limit,
        [](const JetLayout::Product& p, std::uint32_t v) { return p.out < v; });
    layout.products_by_order[k] =
        static_cast<std::size_t>(it - layout.products.begin());
  }

  layout.raise.assign(vars * layout.count, -1);
  for (std::size_t idx = 0; idx < layout.count; ++idx) {
    if (layout.degree[idx] == kMaxJetOrder) continue;
    for (std::size_t v = 0; v < vars; ++v) {
      for (std::size_t w = 0; w < vars; ++w) sum[w] = layout.exponents[idx * vars + w];
      ++sum[v];
      layout.raise[v * layout.count + idx] = static_cast<std::int32_t>(lookup.at(sum));
    }
  }
  return layout;
}

}  // namespace

std::int64_t JetLayout::index_of(std::span<const int> alpha) const {
  if (alpha.size() != vars) return -1;
  for (std::size_t idx = 0; idx < count; ++idx) {
    bool match = true;
    for (std::size_t v = 0; v < vars && match; ++v) {
      match = exponents[idx * vars + v] == alpha[v];
    }
    if (match) return static_cast<std::int64_t>(idx);
  }
  return -1;
}

const JetLayout& jet_layout(std::size_t vars) {
  static const std::array<JetLayout, kMaxJetVars + 1> layouts = [] {
    std::array<JetLayout, kMaxJetVars + 1> all;
    for (std::size_t d = 0; d <= kMaxJetVars; ++d) all[d] = build_layout(d);
    return all;
  }();
  if (vars > kMaxJetVars) {
    throw ShapeMismatch("jets support at most " + std::to_string(kMaxJetVars) +
                        " variables, got " + std::to_string(vars));
  }
  return layouts[vars];
}

}  // namespace detail

namespace {

void check_order(int order) {
  if (order < 0 || order > kMaxJetOrder) {
    throw PreconditionError("jet order must be in [0, " +
                            std::to_string(kMaxJetOrder) + "], got " +
                            std::to_string(order));
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::size_t jet_size(std::size_t vars, int order) {
  check_order(order);
  return detail::jet_layout(vars).size(order);
}

TaylorJet::TaylorJet(std::size_t vars, int order)
    : vars_(vars), order_(order), coeffs_(jet_size(vars, order), 0.0) {}

TaylorJet TaylorJet::constant(std::size_t vars, int order, double value) {
  TaylorJet jet(vars, order);
  jet.coeffs_[0] = value;
  return jet;
}

TaylorJet TaylorJet::variable(std::size_t vars, int order, std::size_t index,
                              double base) {
  if (index >= vars) throw ShapeMismatch("variable index out of range");
  TaylorJet jet = constant(vars, order, base);
  if (order >= 1) {
    jet.coeffs_[static_cast<std::size_t>(jet.layout().raise[index * jet.layout().count])] = 1.0;
  }
  return jet;
}

double TaylorJet::coeff(std::span<const int> alpha) const {
  const auto idx = layout().index_of(alpha);
  if (idx < 0 || static_cast<std::size_t>(idx) >= coeffs_.size()) {
    throw PreconditionError("multi-index outside of the jet");
  }
  return coeffs_[static_cast<std::size_t>(idx)];
}

double TaylorJet::partial(std::span<const int> alpha) const {
  double scale = 1.0;
  for (int a : alpha) scale *= factorial(a);
  return coeff(alpha) * scale;
}

double TaylorJet::d(std::size_t i) const {
  if (order_ < 1) throw PreconditionError("first partial needs an order >= 1 jet");
  return coeffs_[static_cast<std::size_t>(layout().raise[i * layout().count])];
}

double TaylorJet::d2(std::size_t i, std::size_t j) const {
  if (order_ < 2) throw PreconditionError("second partial needs an order >= 2 jet");
  const auto& l = layout();
  const auto ei = static_cast<std::size_t>(l.raise[i * l.count]);
  const auto eij = static_cast<std::size_t>(l.raise[j * l.count + ei]);
  return coeffs_[eij] * (i == j ? 2.0 : 1.0);
}

TaylorJet TaylorJet::derivative(std::size_t i) const {
  if (order_ < 1) throw PreconditionError("cannot differentiate an order-0 jet");
  if (i >= vars_) throw ShapeMismatch("derivative variable out of range");
  const auto& l = layout();
  TaylorJet out(vars_, order_ - 1);
  for (std::size_t idx = 0; idx < out.coeffs_.size(); ++idx) {
    const auto up = static_cast<std::size_t>(l.raise[i * l.count + idx]);
    const double exponent = l.exponents[up * vars_ + i];
    out.coeffs_[idx] = exponent * coeffs_[up];
  }
  return out;
}

TaylorJet TaylorJet::truncated(int order) const {
  if (order > order_) throw PreconditionError("cannot raise the order of a jet");
  check_order(order);
  TaylorJet out;
  out.vars_ = vars_;
  out.order_ = order;
  out.coeffs_.assign(coeffs_.begin(),
                     coeffs_.begin() + static_cast<std::ptrdiff_t>(layout().size(order)));
  return out;
}

TaylorJet TaylorJet::compose_series(std::span<const double> series) const {
  if (series.size() < static_cast<std::size_t>(order_) + 1) {
    throw PreconditionError("series shorter than the jet order");
  }
  TaylorJet shift = *this;
  shift.coeffs_[0] = 0.0;
  TaylorJet out = constant(vars_, order_, series[static_cast<std::size_t>(order_)]);
  for (int j = order_ - 1; j >= 0; --j) {
    out = out * shift;
    out.coeffs_[0] += series[static_cast<std::size_t>(j)];
  }
  return out;
}

bool TaylorJet::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](double c) { return std::isfinite(c); });
}

void TaylorJet::match_order(const TaylorJet& other) {
  if (vars_ != other.vars_) {
    throw ShapeMismatch("jets over different variable counts (" +
                        std::to_string(vars_) + " vs " +
                        std::to_string(other.vars_) + ")");
  }
  if (other.order_ < order_) {
    order_ = other.order_;
    coeffs_.resize(other.coeffs_.size());
  }
}

TaylorJet& TaylorJet::operator+=(const TaylorJet& other) {
  match_order(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

TaylorJet& TaylorJet::operator-=(const TaylorJet& other) {
  match_order(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

TaylorJet& TaylorJet::operator*=(const TaylorJet& other) {
  *this = *this * other;
  return *this;
}

TaylorJet& TaylorJet::operator/=(const TaylorJet& other) {
  *this = *this / other;
  return *this;
}

TaylorJet& TaylorJet::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}

TaylorJet& TaylorJet::operator-=(double s) {
  coeffs_[0] -= s;
  return *this;
}

TaylorJet& TaylorJet::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

TaylorJet& TaylorJet::operator/=(double s) {
  for (double& c : coeffs_) c /= s;
  return *this;
}

TaylorJet operator*(const TaylorJet& a, const TaylorJet& b) {
  if (a.vars_ != b.vars_) throw ShapeMismatch("jets over different variable counts");
  const int order = std::min(a.order_, b.order_);
  TaylorJet out(a.vars_, order);
  const auto& l = a.layout();
  const std::size_t terms = l.products_by_order[order];
  const double* pa = a.coeffs_.data();
  const double* pb = b.coeffs_.data();
  double* po = out.coeffs_.data();
  for (std::size_t t = 0; t < terms; ++t) {
    const auto& p = l.products[t];
    po[p.out] += pa[p.lhs] * pb[p.rhs];
  }
  return out;
}

TaylorJet operator/(const TaylorJet& a, const TaylorJet& b) { return a * reciprocal(b); }

TaylorJet operator/(double s, const TaylorJet& a) { return reciprocal(a) * s; }

TaylorJet operator-(TaylorJet a) {
  for (double& c : a.coeffs_) c = -c;
  return a;
}

TaylorJet reciprocal(const TaylorJet& a) {
  const double g0 = a.value();
  if (std::abs(g0) < 1e-300) {
    throw DomainError("division by a jet with vanishing value");
  }
  std::array<double, kMaxJetOrder + 1> series{};
  double p = 1.0 / g0;
  for (int j = 0; j <= a.order(); ++j) {
    series[static_cast<std::size_t>(j)] = (j % 2 == 0 ? p : -p);
    p /= g0;
  }
  return a.compose_series(series);
}

TaylorJet exp(const TaylorJet& a) {
  std::array<double, kMaxJetOrder + 1> series{};
  const double e = std::exp(a.value());
  for (int j = 0; j <= a.order(); ++j) series[static_cast<std::size_t>(j)] = e / factorial(j);
  return a.compose_series(series);
}

TaylorJet log(const TaylorJet& a) {
  const double g0 = a.value();
  if (!(g0 > 0.0)) throw DomainError("log of a non-positive value");
  std::array<double, kMaxJetOrder + 1> series{};
  series[0] = std::log(g0);
  double p = 1.0;
  for (int j = 1; j <= a.order(); ++j) {
    p /= g0;
    series[static_cast<std::size_t>(j)] = (j % 2 == 1 ? 1.0 : -1.0) * p / j;
  }
  return a.compose_series(series);
}

namespace {

TaylorJet real_power(const TaylorJet& a, double p) {
  const double g0 = a.value();
  if (!(g0 > 0.0)) {
    throw DomainError("non-integer power of a non-positive value");
  }
  std::array<double, kMaxJetOrder + 1> series{};
  double binom = 1.0;
  for (int j = 0; j <= a.order(); ++j) {
    series[static_cast<std::size_t>(j)] = binom * std::pow(g0, p - j);
    binom *= (p - j) / (j + 1);
  }
  return a.compose_series(series);
}

}  // namespace

TaylorJet sqrt(const TaylorJet& a) {
  const double g0 = a.value();
  if (g0 < 0.0) throw DomainError("sqrt of a negative value");
  if (g0 == 0.0) {
    if (a.order() == 0) return a;
    throw DomainError("sqrt is not differentiable at zero");
  }
  return real_power(a, 0.5);
}

TaylorJet sin(const TaylorJet& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  const std::array<double, 4> cycle{s, c, -s, -c};
  std::array<double, kMaxJetOrder + 1> series{};
  for (int j = 0; j <= a.order(); ++j) {
    series[static_cast<std::size_t>(j)] = cycle[static_cast<std::size_t>(j % 4)] / factorial(j);
  }
  return a.compose_series(series);
}

TaylorJet cos(const TaylorJet& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  const std::array<double, 4> cycle{c, -s, -c, s};
  std::array<double, kMaxJetOrder + 1> series{};
  for (int j = 0; j <= a.order(); ++j) {
    series[static_cast<std::size_t>(j)] = cycle[static_cast<std::size_t>(j % 4)] / factorial(j);
  }
  return a.compose_series(series);
}

TaylorJet tanh(const TaylorJet& a) {
  // T' = 1 - T^2, solved term by term on the univariate series.
  std::array<double, kMaxJetOrder + 1> t{};
  t[0] = std::tanh(a.value());
  for (int j = 0; j < a.order(); ++j) {
    double square = 0.0;
    for (int i = 0; i <= j; ++i) {
      square += t[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(j - i)];
    }
    t[static_cast<std::size_t>(j + 1)] = ((j == 0 ? 1.0 : 0.0) - square) / (j + 1);
  }
  return a.compose_series(t);
}

TaylorJet atan(const TaylorJet& a) {
  // atan' = 1 / q with q(t) = (1 + g0^2) + 2 g0 t + t^2.
  const double g0 = a.value();
  const double q0 = 1.0 + g0 * g0;
  const double q1 = 2.0 * g0;
  std::array<double, kMaxJetOrder + 1> r{};
  r[0] = 1.0 / q0;
  for (std::size_t j = 1; j <= kMaxJetOrder; ++j) {
    double acc = q1 * r[j - 1];
    if (j >= 2) acc += r[j - 2];
    r[j] = -acc / q0;
  }
  std::array<double, kMaxJetOrder + 1> series{};
  series[0] = std::atan(g0);
  for (int j = 1; j <= a.order(); ++j) {
    series[static_cast<std::size_t>(j)] = r[static_cast<std::size_t>(j - 1)] / j;
  }
  return a.compose_series(series);
}

TaylorJet pow(const TaylorJet& a, int n) {
  if (n < 0) return reciprocal(pow(a, -n));
  TaylorJet result = TaylorJet::constant(a.num_vars(), a.order(), 1.0);
  TaylorJet base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

TaylorJet pow(const TaylorJet& a, double p) {
  if (std::nearbyint(p) == p && std::abs(p) <= 1 << 20) {
    return pow(a, static_cast<int>(p));
  }
  return real_power(a, p);
}

TaylorJet compose(const TaylorJet& f, std::span<const TaylorJet> g) {
  if (f.num_vars() != g.size()) {
    throw ShapeMismatch("composition needs one inner jet per outer variable");
  }
  if (g.empty()) return f.truncated(0);
  const std::size_t inner_vars = g[0].num_vars();
  int order = f.order();
  for (const auto& gi : g) {
    if (gi.num_vars() != inner_vars) throw ShapeMismatch("inner jets disagree on variables");
    order = std::min(order, gi.order());
  }

  // powers[v][e] = (g_v - g_v(p))^e
  std::vector<std::vector<TaylorJet>> powers(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    TaylorJet shifted = g[v].truncated(order);
    shifted.coefficients()[0] = 0.0;
    powers[v].push_back(TaylorJet::constant(inner_vars, order, 1.0));
    for (int e = 1; e <= order; ++e) powers[v].push_back(powers[v].back() * shifted);
  }

  const auto& outer = detail::jet_layout(g.size());
  const auto coeffs = f.coefficients();
  TaylorJet result(inner_vars, order);
  for (std::size_t idx = 0; idx < outer.size(order); ++idx) {
    const double c = coeffs[idx];
    if (c == 0.0) continue;
    TaylorJet term = TaylorJet::constant(inner_vars, order, c);
    for (std::size_t v = 0; v < g.size(); ++v) {
      const int e = outer.exponents[idx * g.size() + v];
      if (e > 0) term = term * powers[v][static_cast<std::size_t>(e)];
    }
    result += term;
  }
  return result;
}

std::vector<TaylorJet> coordinate_jets(std::span<const double> base, int order) {
  std::vector<TaylorJet> out;
  out.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    out.push_back(TaylorJet::variable(base.size(), order, i, base[i]));
  }
  return out;
}

}  // namespace zeroform
