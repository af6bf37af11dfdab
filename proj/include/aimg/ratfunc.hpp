#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "aimg/poly.hpp"

namespace aimg {

/// num/den in lowest terms, integer coefficients with joint content 1,
/// leading coefficient of den positive.
class RationalMap {
 public:
  RationalMap() : num_(Poly::x()), den_(Poly::constant(1)) {}
  RationalMap(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { canonicalize(); }
  static RationalMap identity() { return {}; }
  static RationalMap polynomial(Poly p) { return {std::move(p), Poly::constant(1)}; }
  static RationalMap constant(const Rational& a) { return polynomial(Poly::constant(a)); }
  /// (a t + b) / (c t + d)
  static RationalMap moebius(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
    return {Poly({b, a}), Poly({d, c})};
  }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  int degree() const { return std::max(num_.degree(), den_.degree()); }
  bool is_polynomial() const { return den_.degree() == 0; }

  friend bool operator==(const RationalMap& a, const RationalMap& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  std::string to_string(const std::string& var = "t") const {
    if (is_polynomial() && den_.leading() == 1) return num_.to_string(var);
    return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
  }

 private:
  void canonicalize() {
    if (den_.is_zero()) throw Error(ErrorKind::ZeroInput, "rational map with zero denominator");
    if (num_.is_zero()) {
      den_ = Poly::constant(1);
      return;
    }
    auto g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = num_.divmod(g).first;
      den_ = den_.divmod(g).first;
    }
    Rational s = primitive_scale({&num_, &den_});
    if (den_.leading() < 0) s = -s;
    num_ = s * num_;
    den_ = s * den_;
  }
  Poly num_, den_;
};

inline ProjPoint evaluate(const RationalMap& f, const ProjPoint& x) {
  if (!x) {
    const int dn = f.num().degree(), dd = f.den().degree();
    if (dn > dd) return std::nullopt;
    if (dn < dd) return Rational(0);
    return f.num().leading() / f.den().leading();
  }
  const Rational d = f.den()(*x);
  if (d == 0) return std::nullopt;
  return f.num()(*x) / d;
}

namespace detail {

/// sum_i p_i a^i b^(n-i), i.e. b^n p(a/b).
inline Poly homogenize(const Poly& p, const Poly& a, const Poly& b, int n) {
  Poly out;
  std::vector<Poly> apow{Poly::constant(1)}, bpow{Poly::constant(1)};
  for (int i = 1; i <= n; ++i) {
    apow.push_back(apow.back() * a);
    bpow.push_back(bpow.back() * b);
  }
  for (int i = 0; i <= p.degree(); ++i)
    out = out + p.coeff(i) * (apow[static_cast<std::size_t>(i)] * bpow[static_cast<std::size_t>(n - i)]);
  return out;
}

/// Basis of the right nullspace of a dense rational matrix.
inline std::vector<std::vector<Rational>> nullspace(std::vector<std::vector<Rational>> m, std::size_t cols) {
  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    const Rational inv = 1 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t k = 0; k < cols; ++k) m[r][k] -= f * m[row][k];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++row;
  }
  std::vector<char> is_pivot(cols, 0);
  for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = 1;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(cols);
    v[f] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) v[static_cast<std::size_t>(pivot_col[r])] = -m[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace detail

/// outer(inner(t)).
inline RationalMap compose(const RationalMap& outer, const RationalMap& inner) {
  const int n = outer.degree();
  return {detail::homogenize(outer.num(), inner.num(), inner.den(), n),
          detail::homogenize(outer.den(), inner.num(), inner.den(), n)};
}

/// The J with pi = J o u, by undetermined coefficients on J = P/Q.
inline RationalMap solve_left_factor(const RationalMap& pi, const RationalMap& u) {
  const int du = u.degree(), dp = pi.degree();
  if (du < 1) throw Error(ErrorKind::DegreeMismatch, "inner map is constant");
  if (dp % du != 0)
    throw Error(ErrorKind::DegreeMismatch,
                "deg u = " + std::to_string(du) + " does not divide deg pi = " + std::to_string(dp));
  const int n = dp / du;
  // P(u) den(pi) - Q(u) num(pi) = 0 after clearing by den(u)^n
  std::vector<Poly> cols;
  for (int i = 0; i <= n; ++i)
    cols.push_back(detail::homogenize(Poly::monomial(1, i), u.num(), u.den(), n) * pi.den());
  for (int i = 0; i <= n; ++i)
    cols.push_back(-(detail::homogenize(Poly::monomial(1, i), u.num(), u.den(), n) * pi.num()));
  int rows = 0;
  for (const auto& c : cols) rows = std::max(rows, c.degree() + 1);
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(rows), std::vector<Rational>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (int r = 0; r < rows; ++r) m[static_cast<std::size_t>(r)][j] = cols[j].coeff(r);
  auto basis = detail::nullspace(std::move(m), cols.size());
  for (const auto& v : basis) {
    Poly p(std::vector<Rational>(v.begin(), v.begin() + n + 1));
    Poly q(std::vector<Rational>(v.begin() + n + 1, v.end()));
    if (q.is_zero()) continue;
    RationalMap j(p, q);
    if (compose(j, u) == pi) return j;
  }
  throw Error(ErrorKind::NoDecomposition, pi.to_string() + " is not a rational function of " + u.to_string());
}

/// All x in P^1(Q) with f(x) = j.
inline std::vector<ProjPoint> rational_fibers(const RationalMap& f, const ProjPoint& j) {
  std::vector<ProjPoint> out;
  const Poly fiber = j ? f.num() - *j * f.den() : f.den();
  if (fiber.is_zero()) throw Error(ErrorKind::DegreeMismatch, "constant map has every point in the fiber");
  for (const auto& r : rational_roots(fiber)) out.emplace_back(r);
  if (evaluate(f, std::nullopt) == j) out.emplace_back(std::nullopt);
  return out;
}

/// Ramification indices of f over j, one per geometric point of the fiber,
/// sorted ascending. Uses a squarefree decomposition, so no roots are found.
inline std::vector<int> fiber_multiplicities(const RationalMap& f, const ProjPoint& j) {
  const Poly fiber = j ? f.num() - *j * f.den() : f.den();
  if (fiber.is_zero()) throw Error(ErrorKind::DegreeMismatch, "constant map has every point in the fiber");
  std::vector<int> out;
  if (const int e = f.degree() - fiber.degree(); e > 0) out.push_back(e);  // t = infinity
  if (fiber.degree() > 0) {
    // Yun: b runs through the products of factors of multiplicity >= k
    auto a = gcd(fiber, fiber.derivative());
    Poly b = fiber.divmod(a).first, c = fiber.derivative().divmod(a).first;
    Poly d = c - b.derivative();
    for (int k = 1; b.degree() > 0; ++k) {
      auto ak = gcd(b, d);
      b = b.divmod(ak).first;
      c = d.divmod(ak).first;
      d = c - b.derivative();
      for (int i = 0; i < ak.degree(); ++i) out.push_back(k);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

/// The Moebius map sending x_k to y_k for three distinct points of P^1.
inline std::optional<RationalMap> moebius_through(const std::array<ProjPoint, 3>& x, const std::array<ProjPoint, 3>& y) {
  // g = (a t + b)/(c t + d); each condition a x + b = y (c x + d) in homogeneous form
  std::vector<std::vector<Rational>> m;
  for (int k = 0; k < 3; ++k) {
    const Rational x0 = x[k] ? *x[k] : Rational(1), x1 = x[k] ? Rational(1) : Rational(0);
    const Rational y0 = y[k] ? *y[k] : Rational(1), y1 = y[k] ? Rational(1) : Rational(0);
    // y1 (a x0 + b x1) - y0 (c x0 + d x1) = 0
    m.push_back({y1 * x0, y1 * x1, -y0 * x0, -y0 * x1});
  }
  auto basis = nullspace(std::move(m), 4);
  if (basis.size() != 1) return std::nullopt;
  const auto& v = basis[0];
  if (v[0] * v[3] - v[1] * v[2] == 0) return std::nullopt;
  return RationalMap::moebius(v[0], v[1], v[2], v[3]);
}

/// Coefficients (a, b, c, d) of a canonical degree-1 map (a t + b)/(c t + d).
inline std::array<Rational, 4> moebius_coefficients(const RationalMap& g) {
  return {g.num().coeff(1), g.num().coeff(0), g.den().coeff(1), g.den().coeff(0)};
}

/// Prefers smaller absolute values coefficient by coefficient, then the
/// positive sign.
inline bool moebius_less(const RationalMap& a, const RationalMap& b) {
  auto ca = moebius_coefficients(a), cb = moebius_coefficients(b);
  for (int i = 0; i < 4; ++i) {
    const Rational x = abs(ca[i]), y = abs(cb[i]);
    if (x != y) return x < y;
    if (ca[i] != cb[i]) return ca[i] > cb[i];
  }
  return false;
}

}  // namespace detail

/// A degree-1 g over Q with u = pi2 o g, found by matching fibers of three
/// points and verified symbolically.
inline std::optional<RationalMap> moebius_equivalent(const RationalMap& u, const RationalMap& pi2) {
  if (u.degree() != pi2.degree() || u.degree() < 1) return std::nullopt;
  const std::array<ProjPoint, 3> xs{Rational(0), Rational(1), std::nullopt};
  std::array<std::vector<ProjPoint>, 3> fibers;
  for (int k = 0; k < 3; ++k) {
    fibers[k] = rational_fibers(pi2, evaluate(u, xs[k]));
    if (fibers[k].empty()) return std::nullopt;
  }
  std::optional<RationalMap> best;
  for (const auto& y0 : fibers[0])
    for (const auto& y1 : fibers[1])
      for (const auto& y2 : fibers[2]) {
        if (y0 == y1 || y0 == y2 || y1 == y2) continue;
        auto g = detail::moebius_through(xs, {y0, y1, y2});
        if (!g || !(compose(pi2, *g) == u)) continue;
        if (!best || detail::moebius_less(*g, *best)) best = g;
      }
  return best;
}

/// One of the six base families of maps, with its twisted version.
struct MapCatalogEntry {
  int index = 0;
  bool needs_alpha = false;
  int degree = 0;
  /// (num, den) given alpha (ignored when not needed).
  std::function<std::pair<Poly, Poly>(const Rational& alpha)> base;
  /// (num, den) given alpha and v.
  std::function<std::pair<Poly, Poly>(const Rational& alpha, const Rational& v)> twisted;
};

/// The maps pi_1, ..., pi_6 and pi_{i,v}. pi_{2,v} keeps its printed numerator
/// v t^2 - 4 alpha t + alpha t; replace `twisted` on a copy to override it.
inline std::vector<MapCatalogEntry> default_map_catalog() {
  using P = Poly;
  std::vector<MapCatalogEntry> c;
  c.push_back({1, false, 2, [](const Rational&) { return std::pair{P({0, 0, 1}), P({1})}; },
               [](const Rational&, const Rational& v) { return std::pair{P({0, 0, v}), P({1})}; }});
  c.push_back({2, true, 2, [](const Rational& a) { return std::pair{P({a, 0, 1}), P({0, 1})}; },
               [](const Rational& a, const Rational& v) {
                 return std::pair{P({0, -4 * a + a, v}), P({-a, v, -1})};
               }});
  c.push_back({3, false, 3, [](const Rational&) { return std::pair{P({1, -3, 0, 1}), P({0, -1, 1})}; },
               [](const Rational&, const Rational& v) {
                 const Rational v2 = v * v, v3 = v2 * v, v4 = v3 * v;
                 return std::pair{P({-v4 + 3 * v3 - 6 * v2 - v + 3, -3 * v3 + 9 * v2 - 15 * v, -3 * v2 + 9 * v - 9, -v + 3}),
                                  P({v2 - 3 * v + 1, v2 + v - 3, 2 * v, 1})};
               }});
  c.push_back({4, false, 4, [](const Rational&) { return std::pair{P({1, 0, -6, 0, 1}), P({0, -1, 0, 1})}; },
               [](const Rational&, const Rational& v) {
                 return std::pair{P({7 * v - 96, 8 * v + 176, -18 * v - 96, 8 * v + 16, -v}),
                                  P({-6 * v - 7, 11 * v - 8, -6 * v + 18, v - 8, 1})};
               }});
  c.push_back({5, true, 4, [](const Rational& a) { return std::pair{P({a * a, 0, 0, 0, 1}), P({0, 0, 1})}; },
               [](const Rational& a, const Rational& v) {
                 const Rational a2 = a * a;
                 return std::pair{P({v, -8 * a2, 6 * v * a2, (8 * a2 - 4 * v * v) * a2, (-3 * v * a2 + v * v * v) * a2}),
                                  P({1, -2 * v, 2 * a2 + v * v, -2 * v * a2, a2 * a2})};
               }});
  c.push_back({6, false, 4, [](const Rational&) { return std::pair{P({1, 0, 2, 0, 1}), P({0, -1, 0, 1})}; },
               [](const Rational&, const Rational& v) {
                 const Rational v2 = v * v, v3 = v2 * v;
                 return std::pair{P({-v3, 8 * v3 - 16 * v2, -26 * v3 + 96 * v2 - 64 * v, 40 * v3 - 208 * v2 + 256 * v,
                                     -25 * v3 + 160 * v2 - 256 * v}),
                                  P({-v2, -v3 + 8 * v2, 6 * v3 - 30 * v2, -11 * v3 + 56 * v2 - 32 * v,
                                     6 * v3 - 37 * v2 + 64 * v - 64})};
               }});
  return c;
}

/// A catalog map with its parameters. `degenerate` is set when numerator and
/// denominator shared a factor after substitution; `map` is then the
/// cancelled map.
struct InstantiatedMap {
  RationalMap map;
  int index = 0;
  std::optional<Rational> alpha, v;
  bool degenerate = false;
};

/// pi_i (v absent) or pi_{i,v}. Throws MissingParameter; degenerate
/// substitutions are flagged on the result (see instantiate_checked).
inline InstantiatedMap instantiate(const std::vector<MapCatalogEntry>& catalog, int index,
                                   const std::optional<Rational>& alpha, const std::optional<Rational>& v,
                                   bool twisted) {
  const MapCatalogEntry* e = nullptr;
  for (const auto& x : catalog)
    if (x.index == index) e = &x;
  if (!e) throw Error(ErrorKind::UnknownLabel, "no catalog map pi_" + std::to_string(index));
  if (e->needs_alpha && !alpha) throw Error(ErrorKind::MissingParameter, "pi_" + std::to_string(index) + " needs alpha");
  if (twisted && !v) throw Error(ErrorKind::MissingParameter, "pi_" + std::to_string(index) + ",v needs v");
  const Rational a = alpha.value_or(0);
  auto [num, den] = twisted ? e->twisted(a, *v) : e->base(a);
  if (den.is_zero())
    throw Error(ErrorKind::DegenerateSubstitution, "denominator of pi_" + std::to_string(index) + " vanishes identically");
  InstantiatedMap out{RationalMap(num, den), index, e->needs_alpha ? alpha : std::nullopt,
                      twisted ? v : std::nullopt, false};
  out.degenerate = out.map.degree() != std::max(num.degree(), den.degree()) || out.map.degree() != e->degree;
  return out;
}

/// instantiate, raising DegenerateSubstitution instead of flagging it.
inline RationalMap instantiate_checked(const std::vector<MapCatalogEntry>& catalog, int index,
                                       const std::optional<Rational>& alpha, const std::optional<Rational>& v,
                                       bool twisted) {
  auto r = instantiate(catalog, index, alpha, v, twisted);
  if (r.degenerate)
    throw Error(ErrorKind::DegenerateSubstitution,
                "pi_" + std::to_string(index) + (twisted ? ",v" : "") + " collapses to " + r.map.to_string());
  return r.map;
}

}  // namespace aimg
