#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aimg/error.hpp"

namespace aimg {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A point of P^1(Q); nullopt is the point at infinity.
using ProjPoint = std::optional<Rational>;

inline Rational parse_rational(const std::string& s) {
  auto trim = [](std::string x) {
    x.erase(std::remove_if(x.begin(), x.end(), [](unsigned char c) { return std::isspace(c); }), x.end());
    return x;
  };
  const std::string t = trim(s);
  try {
    const auto slash = t.find('/');
    if (slash == std::string::npos) return Rational(BigInt(t));
    BigInt den(t.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + s + "'");
    return Rational(BigInt(t.substr(0, slash)), den);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "not a rational number: '" + s + "'");
  }
}

/// "inf", "infinity" or "oo" for the point at infinity, else a rational.
inline ProjPoint parse_proj_point(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "oo" || s == "∞") return std::nullopt;
  return parse_rational(s);
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline std::string to_string(const ProjPoint& x) { return x ? to_string(*x) : "inf"; }

/// Dense univariate polynomial over Q, coefficients from the constant term up.
class Poly {
 public:
  Poly() = default;
  Poly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
  static Poly constant(const Rational& a) { return Poly(std::vector<Rational>{a}); }
  static Poly x() { return Poly(std::vector<Rational>{0, 1}); }
  static Poly monomial(const Rational& a, int k) {
    std::vector<Rational> c(static_cast<std::size_t>(k) + 1);
    c.back() = a;
    return Poly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const {
    return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : Rational(0);
  }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational operator()(const Rational& x) const {
    Rational r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a) {
    auto c = a.c_;
    for (auto& x : c) x = -x;
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  friend Poly operator*(const Rational& s, const Poly& a) { return Poly::constant(s) * a; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  Poly pow(int k) const {
    Poly r = constant(1);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Quotient and remainder; throws ZeroInput on division by zero.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) throw Error(ErrorKind::ZeroInput, "polynomial division by zero");
    std::vector<Rational> r = c_;
    const int n = degree(), m = d.degree();
    if (n < m) return {Poly(), *this};
    std::vector<Rational> q(static_cast<std::size_t>(n - m) + 1);
    for (int k = n - m; k >= 0; --k) {
      const Rational f = r[static_cast<std::size_t>(k + m)] / d.leading();
      q[static_cast<std::size_t>(k)] = f;
      for (int j = 0; j <= m; ++j) r[static_cast<std::size_t>(k + j)] -= f * d.c_[static_cast<std::size_t>(j)];
    }
    return {Poly(std::move(q)), Poly(std::move(r))};
  }

  Poly derivative() const {
    std::vector<Rational> c;
    for (std::size_t i = 1; i < c_.size(); ++i) c.push_back(c_[i] * static_cast<int>(i));
    return Poly(std::move(c));
  }

  Poly monic() const {
    if (is_zero()) return *this;
    const Rational l = leading();
    auto c = c_;
    for (auto& x : c) x /= l;
    return Poly(std::move(c));
  }

  /// p(q(t)).
  Poly compose(const Poly& q) const {
    Poly r;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * q + constant(*it);
    return r;
  }

  std::string to_string(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      const Rational& a = c_[static_cast<std::size_t>(i)];
      if (a == 0) continue;
      const bool neg = a < 0;
      const Rational mag = neg ? Rational(-a) : a;
      if (out.empty()) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      if (i == 0 || mag != 1) out += aimg::to_string(mag) + (i > 0 ? "*" : "");
      if (i >= 1) out += var;
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// Monic gcd; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

inline BigInt lcm_big(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

/// Integer scale s > 0 with s * p having coprime integer coefficients.
inline Rational primitive_scale(const std::vector<const Poly*>& ps) {
  BigInt den = 1, g = 0;
  for (const auto* p : ps)
    for (const auto& a : p->coeffs()) den = lcm_big(den, denominator(a));
  for (const auto* p : ps)
    for (const auto& a : p->coeffs()) g = gcd(g, abs(numerator(a) * (den / denominator(a))));
  if (g == 0) return 1;
  return Rational(den, g);
}

/// Exact rational roots, each listed once, in increasing order.
inline std::vector<Rational> rational_roots(const Poly& p);

namespace detail {

/// Sturm sequence of a squarefree polynomial.
inline std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> s{p, p.derivative()};
  while (!s.back().is_zero() && s.back().degree() > 0) {
    auto r = s[s.size() - 2].divmod(s.back()).second;
    if (r.is_zero()) break;
    s.push_back(-r);
  }
  return s;
}

inline int sign_changes(const std::vector<Poly>& chain, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& q : chain) {
    const Rational v = q(x);
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace detail

inline std::vector<Rational> rational_roots(const Poly& p) {
  if (p.degree() < 1) return {};
  std::vector<Rational> out;
  // roots at zero first, then work with a nonzero constant term
  Poly q = p;
  int low = 0;
  while (q.coeff(low) == 0) ++low;
  if (low > 0) {
    out.push_back(0);
    q = Poly(std::vector<Rational>(q.coeffs().begin() + low, q.coeffs().end()));
  }
  if (q.degree() >= 1) {
    q = q.divmod(gcd(q, q.derivative())).first;  // squarefree part
    const Rational s = primitive_scale({&q});
    q = s * q;
    const BigInt lead = abs(numerator(q.leading()));
    // Cauchy bound
    Rational bound = 0;
    for (const auto& a : q.coeffs()) bound = std::max(bound, Rational(abs(a) / abs(q.leading())));
    bound += 1;
    const auto chain = detail::sturm_chain(q);
    // every rational root has denominator dividing lead, so an interval of
    // width below 1 / (2 lead) holds at most one candidate k / lead
    const Rational width = Rational(1, 2 * lead);
    std::vector<std::pair<Rational, Rational>> work{{-bound, bound}};
    while (!work.empty()) {
      auto [a, b] = work.back();
      work.pop_back();
      const int n = detail::sign_changes(chain, a) - detail::sign_changes(chain, b);
      if (n == 0) continue;
      if (b - a < width) {
        const Rational mid = (a + b) / 2;
        const Rational scaled = mid * Rational(lead);
        BigInt k = numerator(scaled) / denominator(scaled);
        for (BigInt d = k - 1; d <= k + 1; ++d) {
          const Rational c(d, lead);
          if (c > a && c <= b && q(c) == 0) out.push_back(c);
        }
        continue;
      }
      const Rational mid = (a + b) / 2;
      work.push_back({a, mid});
      work.push_back({mid, b});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace aimg
