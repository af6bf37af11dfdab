#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "aimg/numtheory.hpp"
#include "aimg/ratfunc.hpp"

namespace aimg {

namespace detail {

inline BigInt isqrt(const BigInt& n) { return boost::multiprecision::sqrt(n); }

inline bool is_square_int(const BigInt& n) {
  if (n < 0) return false;
  const BigInt r = isqrt(n);
  return r * r == n;
}

/// Squarefree part of a positive integer by trial division. Whatever is left
/// after removing primes below the cube root is 1, a prime, a product of two
/// primes, or a prime square.
inline BigInt squarefree_part_positive(BigInt n) {
  constexpr long long kTrialLimit = 20'000'000;
  BigInt out = 1;
  for (long long d = 2;; d += d == 2 ? 1 : 2) {
    const BigInt bd = d;
    if (bd * bd * bd > n) break;
    if (d > kTrialLimit) throw Error(ErrorKind::ResourceExceeded, "integer too large to factor: " + n.str());
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e % 2) out *= d;
  }
  if (n > 1 && !is_square_int(n)) out *= n;
  return out;
}

}  // namespace detail

/// The squarefree integer d with q / d a rational square.
inline BigInt squarefree_part(const Rational& q) {
  if (q == 0) throw Error(ErrorKind::ZeroInput, "squarefree part of 0");
  BigInt n = abs(numerator(q) * denominator(q));
  const BigInt d = detail::squarefree_part_positive(n);
  return q < 0 ? BigInt(-d) : d;
}

inline bool is_rational_square(const Rational& q) {
  if (q < 0) return false;
  return detail::is_square_int(numerator(q)) && detail::is_square_int(denominator(q));
}

/// Discriminant of Q(sqrt(d)) for squarefree d != 1.
inline BigInt quadratic_discriminant(const BigInt& d) {
  BigInt r = d % 4;
  if (r < 0) r += 4;
  return r == 1 ? d : BigInt(4 * d);
}

/// K_M = Q(zeta_M) (fixed) or the union of the Q(zeta_{M^n}) (tower).
enum class CycMode { Tower, Fixed };

inline std::string to_string(CycMode m) { return m == CycMode::Tower ? "tower" : "fixed"; }

/// Whether Q(sqrt(d)) meets K trivially. Q(sqrt(d)) lies in Q(zeta_m) iff
/// its discriminant divides m.
inline bool quad_cyc_trivial(const Rational& d, i64 m, CycMode mode) {
  if (m < 1) throw Error(ErrorKind::NotADivisor, "M must be positive");
  const BigInt s = squarefree_part(d);
  if (s == 1) return true;
  const BigInt disc = abs(quadratic_discriminant(s));
  if (mode == CycMode::Fixed) return disc > m || BigInt(m) % disc != 0;
  BigInt rest = disc;
  for (i64 p : nt::prime_divisors(m))
    while (rest % p == 0) rest /= p;
  return rest != 1;
}

enum class QuarticVerdict { NotDegree4, Degree4TrivialIntersection, Degree4NontrivialIntersection };

inline std::string to_string(QuarticVerdict v) {
  switch (v) {
    case QuarticVerdict::NotDegree4: return "NotDegree4";
    case QuarticVerdict::Degree4TrivialIntersection: return "Degree4TrivialIntersection";
    case QuarticVerdict::Degree4NontrivialIntersection: return "Degree4NontrivialIntersection";
  }
  return "?";
}

enum class QuarticGalois { V4, C4, D4 };

/// Irreducibility of x^4 + p x^2 + q: reducible iff p^2 - 4q is a square, or
/// q = b^2 and 2b - p is a square for one of the two signs of b.
inline bool biquadratic_irreducible(const Rational& p, const Rational& q) {
  if (is_rational_square(p * p - 4 * q)) return false;
  if (is_rational_square(q)) {
    const Rational b(detail::isqrt(numerator(q)), detail::isqrt(denominator(q)));
    if (is_rational_square(2 * b - p) || is_rational_square(-2 * b - p)) return false;
  }
  return true;
}

/// Galois group of an irreducible x^4 + p x^2 + q.
inline QuarticGalois biquadratic_galois(const Rational& p, const Rational& q) {
  if (is_rational_square(q)) return QuarticGalois::V4;
  if (is_rational_square(q * (p * p - 4 * q))) return QuarticGalois::C4;
  return QuarticGalois::D4;
}

/// Quadratic subfields of Q(theta), theta a root of an irreducible
/// x^4 + p x^2 + q, as radicands.
inline std::vector<Rational> biquadratic_quadratic_subfields(const Rational& p, const Rational& q) {
  const Rational delta = p * p - 4 * q;
  if (biquadratic_galois(p, q) != QuarticGalois::V4) return {delta};
  // theta1 theta2 = b and (theta1 +- theta2)^2 = -p +- 2b
  const Rational b(detail::isqrt(numerator(q)), detail::isqrt(denominator(q)));
  return {delta, 2 * b - p, -2 * b - p};
}

/// Degree and cyclotomic intersection of Q(theta) for x^4 + p x^2 + q. The
/// intersection with an abelian K is Galois over Q, so it is nontrivial
/// iff it contains a quadratic subfield of Q(theta).
inline QuarticVerdict quartic_condition(const Rational& p, const Rational& q, i64 m, CycMode mode = CycMode::Tower) {
  if (q == 0 || p * p == 4 * q) throw Error(ErrorKind::DegenerateQuartic, "x^4 + p x^2 + q has a repeated root");
  if (!biquadratic_irreducible(p, q)) return QuarticVerdict::NotDegree4;
  for (const auto& d : biquadratic_quadratic_subfields(p, q))
    if (!quad_cyc_trivial(d, m, mode)) return QuarticVerdict::Degree4NontrivialIntersection;
  return QuarticVerdict::Degree4TrivialIntersection;
}

/// Irreducibility over Q of a polynomial of degree at most 4.
inline bool is_irreducible_small(const Poly& f) {
  const int n = f.degree();
  if (n < 1 || n > 4) throw Error(ErrorKind::UnsupportedShape, "irreducibility only for degrees 1 to 4");
  if (n == 1) return true;
  if (!rational_roots(f).empty()) return false;
  if (n <= 3) return true;
  // depress the monic quartic: y^4 + P y^2 + Q y + R with x = y - a/4
  const Poly g = f.monic();
  const Rational a = g.coeff(3);
  const Poly dep = g.compose(Poly({-a / 4, 1}));
  const Rational P = dep.coeff(2), Q = dep.coeff(1), R = dep.coeff(0);
  if (Q == 0) return biquadratic_irreducible(P, R);
  // (y^2 + u y + s)(y^2 - u y + t) needs u^2 to be a root of the resolvent
  const Poly resolvent({-Q * Q, P * P - 4 * R, 2 * P, 1});
  for (const auto& z : rational_roots(resolvent))
    if (z != 0 && is_rational_square(z)) return false;
  return true;
}

/// The two shipped nested radicals
///   theta = -sqrt(w)/4 + (1/2) sqrt(v^2/2 - v w / (2 sqrt(w)) + c),
/// with w = v^2 + 16, c = 8 (pi_4 rows) or w = v^2 - 16, c = 0 (pi_6 rows).
enum class RadicalShape { Pi4, Pi6 };

inline RadicalShape parse_radical_shape(const std::string& s) {
  if (s == "pi4") return RadicalShape::Pi4;
  if (s == "pi6") return RadicalShape::Pi6;
  throw Error(ErrorKind::UnsupportedShape, "unknown nested radical shape '" + s + "'");
}

inline std::complex<double> nested_radical_value(RadicalShape shape, const Rational& v) {
  const double x = v.convert_to<double>();
  const double w = shape == RadicalShape::Pi4 ? x * x + 16 : x * x - 16;
  const double c = shape == RadicalShape::Pi4 ? 8 : 0;
  const std::complex<double> s = std::sqrt(std::complex<double>(w));
  const std::complex<double> inner = x * x / 2 - (x * w) / (2.0 * s) + c;
  return -s / 4.0 + 0.5 * std::sqrt(inner);
}

/// Integer quartic annihilating the nested radical. With s^2 = w,
/// theta + s/4 = sqrt(R)/2 squares to C + s D = 0 where
/// C = theta^2 + w/16 - v^2/8 - c/4 and D = theta/2 + v/8, so C^2 - w D^2 = 0.
inline Poly nested_radical_min_poly(RadicalShape shape, const Rational& v) {
  const Rational w = shape == RadicalShape::Pi4 ? Rational(v * v + 16) : Rational(v * v - 16);
  const Rational c = shape == RadicalShape::Pi4 ? 8 : 0;
  if (w == 0) throw Error(ErrorKind::DegenerateRadicand, "v^2 - 16 = 0 at v = " + to_string(v));
  const Rational a = w / 16 - v * v / 8 - c / 4;
  const Poly cpoly({a, 0, 1});
  const Poly dpoly({v / 8, Rational(1, 2)});
  Poly p = cpoly * cpoly - w * (dpoly * dpoly);
  p = primitive_scale({&p}) * p;
  // validation only; the decision procedures never read the float value
  const auto theta = nested_radical_value(shape, v);
  std::complex<double> val = 0;
  double scale = 0;
  for (int i = p.degree(); i >= 0; --i) {
    val = val * theta + p.coeff(i).convert_to<double>();
    scale = scale * std::abs(theta) + std::abs(p.coeff(i).convert_to<double>());
  }
  if (std::abs(val) > 1e-9 * std::max(1.0, scale))
    throw Error(ErrorKind::InvariantViolation, "nested radical is not a root of " + p.to_string("x"));
  return p;
}

/// Cubic standing in for the 2C-2A radical field (experimental):
/// x^3 + 2v x^2 + (v^2 + v - 3) x + (v^2 - 3v + 1).
inline Poly cubic_proxy(const Rational& v) {
  return Poly({v * v - 3 * v + 1, v * v + v - 3, 2 * v, 1});
}

/// Leaf predicates of a v-condition. Polynomials are in v.
struct VLeaf {
  enum class Kind {
    SquarefreeIntNotPm1,
    NotASquare,
    QuadCycTrivial,
    QuarticIrreducible,
    QuarticCycTrivial,
    NestedRadicalDegree4,
    CubicProxyIrreducible,
    SpecificSet,
    AvoidJValues,
  };
  Kind kind = Kind::SquarefreeIntNotPm1;
  Poly p;  // radicand, or the x^2 coefficient of the quartic
  Poly q;  // constant term of the quartic
  i64 m = 1;
  CycMode mode = CycMode::Tower;
  RadicalShape shape = RadicalShape::Pi4;
  std::vector<Rational> values;
  std::optional<RationalMap> j;

  std::string describe() const;
};

/// Conjunction of leaves.
struct VCondition {
  std::vector<VLeaf> all;
};

struct LeafVerdict {
  std::string leaf;
  bool holds = false;
  std::string reason;
  bool experimental = false;
};

struct ConditionResult {
  bool holds = true;
  std::vector<LeafVerdict> trace;
};

inline std::string VLeaf::describe() const {
  switch (kind) {
    case Kind::SquarefreeIntNotPm1: return "v squarefree integer, v != +-1";
    case Kind::NotASquare: return p.to_string("v") + " not a nonzero square";
    case Kind::QuadCycTrivial:
      return "Q(sqrt(" + p.to_string("v") + ")) meets K_" + std::to_string(m) + (mode == CycMode::Tower ? "^inf" : "") +
             " trivially";
    case Kind::QuarticIrreducible: return "x^4 + (" + p.to_string("v") + ")x^2 + (" + q.to_string("v") + ") irreducible";
    case Kind::QuarticCycTrivial:
      return "x^4 + (" + p.to_string("v") + ")x^2 + (" + q.to_string("v") + ") degree 4, trivial on K_" +
             std::to_string(m) + (mode == CycMode::Tower ? "^inf" : "");
    case Kind::NestedRadicalDegree4:
      return std::string("nested radical (") + (shape == RadicalShape::Pi4 ? "pi4" : "pi6") + ") of degree 4";
    case Kind::CubicProxyIrreducible: return "cubic proxy x^3 + 2v x^2 + (v^2+v-3)x + (v^2-3v+1) irreducible";
    case Kind::SpecificSet: {
      std::string s = "v in {";
      for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ", " : "") + to_string(values[i]);
      return s + "}";
    }
    case Kind::AvoidJValues: return "J(v) not in {0, 1728, inf}";
  }
  return "?";
}

inline VLeaf avoid_j_leaf(const RationalMap& j) {
  VLeaf l;
  l.kind = VLeaf::Kind::AvoidJValues;
  l.j = j;
  return l;
}

inline LeafVerdict eval_leaf(const VLeaf& leaf, const Rational& v) {
  LeafVerdict out{leaf.describe(), false, "", false};
  using K = VLeaf::Kind;
  try {
    switch (leaf.kind) {
      case K::SquarefreeIntNotPm1: {
        if (denominator(v) != 1) {
          out.reason = "not an integer";
        } else if (v == 1 || v == -1 || v == 0) {
          out.reason = "v is " + to_string(v);
        } else {
          out.holds = squarefree_part(v) == numerator(v);
          if (!out.holds) out.reason = "not squarefree";
        }
        break;
      }
      case K::NotASquare: {
        const Rational x = leaf.p(v);
        out.holds = x == 0 || !is_rational_square(x);
        if (!out.holds) out.reason = to_string(x) + " is a square";
        break;
      }
      case K::QuadCycTrivial: {
        const Rational x = leaf.p(v);
        out.holds = quad_cyc_trivial(x, leaf.m, leaf.mode);
        out.reason = "squarefree part " + squarefree_part(x).str();
        break;
      }
      case K::QuarticIrreducible: {
        const Rational a = leaf.p(v), b = leaf.q(v);
        if (b == 0 || a * a == 4 * b) throw Error(ErrorKind::DegenerateQuartic, "repeated root");
        out.holds = biquadratic_irreducible(a, b);
        if (!out.holds) out.reason = "reducible";
        break;
      }
      case K::QuarticCycTrivial: {
        const auto verdict = quartic_condition(leaf.p(v), leaf.q(v), leaf.m, leaf.mode);
        out.holds = verdict == QuarticVerdict::Degree4TrivialIntersection;
        out.reason = to_string(verdict);
        break;
      }
      case K::NestedRadicalDegree4: {
        const auto p = nested_radical_min_poly(leaf.shape, v);
        out.holds = is_irreducible_small(p);
        out.reason = "minimal polynomial candidate " + p.to_string("x");
        break;
      }
      case K::CubicProxyIrreducible: {
        out.experimental = true;
        out.holds = is_irreducible_small(cubic_proxy(v));
        out.reason = "experimental proxy";
        break;
      }
      case K::SpecificSet: {
        out.holds = std::find(leaf.values.begin(), leaf.values.end(), v) != leaf.values.end();
        break;
      }
      case K::AvoidJValues: {
        const auto jv = evaluate(*leaf.j, v);
        out.holds = jv && *jv != 0 && *jv != 1728;
        out.reason = "J(v) = " + to_string(jv);
        break;
      }
    }
  } catch (const Error& e) {
    out.holds = false;
    out.reason = e.what();
  }
  return out;
}

/// Conjunction of the leaves; when J is given, J(v) not in {0, 1728, inf}
/// is added as a leaf.
inline ConditionResult eval_condition(const VCondition& cond, const Rational& v,
                                      const std::optional<RationalMap>& j = std::nullopt) {
  ConditionResult out;
  auto add = [&](const VLeaf& l) {
    auto r = eval_leaf(l, v);
    out.holds = out.holds && r.holds;
    out.trace.push_back(std::move(r));
  };
  for (const auto& l : cond.all) add(l);
  if (j) add(avoid_j_leaf(*j));
  return out;
}

}  // namespace aimg
