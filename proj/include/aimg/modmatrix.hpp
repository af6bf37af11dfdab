#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>

#include "aimg/error.hpp"
#include "aimg/numtheory.hpp"

namespace aimg {

using i64 = std::int64_t;

/// Largest modulus whose matrices still pack into a 64-bit key.
inline constexpr i64 kMaxKeyModulus = 65535;

/// A 2x2 matrix over Z/NZ held in canonical (fully reduced) form.
class ResidueMatrix {
 public:
  ResidueMatrix() = default;

  ResidueMatrix(i64 a, i64 b, i64 c, i64 d, i64 modulus) : modulus_(modulus) {
    if (modulus < 1) throw Error(ErrorKind::NotADivisor, "modulus must be positive");
    e_ = {nt::mod(a, modulus), nt::mod(b, modulus), nt::mod(c, modulus), nt::mod(d, modulus)};
  }

  static ResidueMatrix identity(i64 modulus) { return {1, 0, 0, 1, modulus}; }
  static ResidueMatrix minus_identity(i64 modulus) { return {-1, 0, 0, -1, modulus}; }
  static ResidueMatrix diagonal(i64 x, i64 y, i64 modulus) { return {x, 0, 0, y, modulus}; }

  static ResidueMatrix from_key(std::uint64_t key, i64 modulus) {
    auto n = static_cast<std::uint64_t>(modulus);
    ResidueMatrix m;
    m.modulus_ = modulus;
    m.e_[3] = static_cast<i64>(key % n);
    key /= n;
    m.e_[2] = static_cast<i64>(key % n);
    key /= n;
    m.e_[1] = static_cast<i64>(key % n);
    key /= n;
    m.e_[0] = static_cast<i64>(key);
    return m;
  }

  i64 a() const { return e_[0]; }
  i64 b() const { return e_[1]; }
  i64 c() const { return e_[2]; }
  i64 d() const { return e_[3]; }
  i64 modulus() const { return modulus_; }
  const std::array<i64, 4>& entries() const { return e_; }

  i64 det() const { return nt::mod(nt::mulmod(e_[0], e_[3], modulus_) - nt::mulmod(e_[1], e_[2], modulus_), modulus_); }

  bool is_invertible() const { return std::gcd(det(), modulus_) == 1; }

  bool is_identity() const { return *this == identity(modulus_); }

  ResidueMatrix transpose() const { return {e_[0], e_[2], e_[1], e_[3], modulus_}; }

  ResidueMatrix inverse() const {
    i64 di = nt::inv_mod(det(), modulus_);
    return {nt::mulmod(e_[3], di, modulus_), nt::mulmod(-e_[1] + modulus_, di, modulus_),
            nt::mulmod(-e_[2] + modulus_, di, modulus_), nt::mulmod(e_[0], di, modulus_), modulus_};
  }

  ResidueMatrix operator*(const ResidueMatrix& o) const {
    if (o.modulus_ != modulus_) throw Error(ErrorKind::ModulusMismatch, to_string() + " * " + o.to_string());
    const i64 n = modulus_;
    ResidueMatrix r;
    r.modulus_ = n;
    r.e_[0] = (nt::mulmod(e_[0], o.e_[0], n) + nt::mulmod(e_[1], o.e_[2], n)) % n;
    r.e_[1] = (nt::mulmod(e_[0], o.e_[1], n) + nt::mulmod(e_[1], o.e_[3], n)) % n;
    r.e_[2] = (nt::mulmod(e_[2], o.e_[0], n) + nt::mulmod(e_[3], o.e_[2], n)) % n;
    r.e_[3] = (nt::mulmod(e_[2], o.e_[1], n) + nt::mulmod(e_[3], o.e_[3], n)) % n;
    return r;
  }

  ResidueMatrix pow(i64 k) const {
    ResidueMatrix base = k < 0 ? inverse() : *this;
    if (k < 0) k = -k;
    ResidueMatrix r = identity(modulus_);
    while (k > 0) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }

  /// Packs the entries into a 64-bit integer; numeric order of keys equals
  /// lexicographic order of (a, b, c, d).
  std::uint64_t key() const {
    if (modulus_ > kMaxKeyModulus)
      throw Error(ErrorKind::ResourceExceeded, "modulus " + std::to_string(modulus_) + " too large for element keys");
    auto n = static_cast<std::uint64_t>(modulus_);
    return ((static_cast<std::uint64_t>(e_[0]) * n + static_cast<std::uint64_t>(e_[1])) * n +
            static_cast<std::uint64_t>(e_[2])) * n + static_cast<std::uint64_t>(e_[3]);
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "[[" << e_[0] << "," << e_[1] << "],[" << e_[2] << "," << e_[3] << "]] mod " << modulus_;
    return os.str();
  }

  friend bool operator==(const ResidueMatrix&, const ResidueMatrix&) = default;
  friend auto operator<=>(const ResidueMatrix& x, const ResidueMatrix& y) {
    if (auto c = x.modulus_ <=> y.modulus_; c != 0) return c;
    return x.e_ <=> y.e_;
  }

 private:
  i64 modulus_ = 1;
  std::array<i64, 4> e_{0, 0, 0, 0};
};

inline std::ostream& operator<<(std::ostream& os, const ResidueMatrix& m) { return os << m.to_string(); }

inline ResidueMatrix mul(const ResidueMatrix& x, const ResidueMatrix& y) { return x * y; }
inline ResidueMatrix inv(const ResidueMatrix& x) { return x.inverse(); }
inline i64 det(const ResidueMatrix& x) { return x.det(); }
inline ResidueMatrix transpose(const ResidueMatrix& x) { return x.transpose(); }

/// Entrywise reduction to a divisor m of the modulus.
inline ResidueMatrix reduce_mod(const ResidueMatrix& x, i64 m) {
  if (m < 1 || x.modulus() % m != 0)
    throw Error(ErrorKind::NotADivisor, std::to_string(m) + " does not divide " + std::to_string(x.modulus()));
  return {x.a(), x.b(), x.c(), x.d(), m};
}

/// Unique matrix modulo lcm(m1, m2) reducing to x and y.
inline ResidueMatrix crt_combine(const ResidueMatrix& x, const ResidueMatrix& y) {
  const i64 m1 = x.modulus(), m2 = y.modulus();
  const i64 l = std::lcm(m1, m2);
  try {
    return {nt::crt(x.a(), m1, y.a(), m2), nt::crt(x.b(), m1, y.b(), m2), nt::crt(x.c(), m1, y.c(), m2),
            nt::crt(x.d(), m1, y.d(), m2), l};
  } catch (const Error&) {
    throw Error(ErrorKind::IncompatibleResidues, x.to_string() + " and " + y.to_string());
  }
}

/// Parses `[[a,b],[c,d]] mod N` (whitespace tolerant, signed entries).
inline ResidueMatrix parse_matrix(const std::string& text) {
  static const std::regex re(
      R"(\s*\[\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*,\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*\]\s*mod\s*(\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw Error(ErrorKind::ParseError, "bad matrix literal: " + text);
  return {std::stoll(m[1]), std::stoll(m[2]), std::stoll(m[3]), std::stoll(m[4]), std::stoll(m[5])};
}

}  // namespace aimg

template <>
struct std::hash<aimg::ResidueMatrix> {
  std::size_t operator()(const aimg::ResidueMatrix& m) const noexcept {
    std::size_t h = std::hash<aimg::i64>{}(m.modulus());
    for (auto v : m.entries()) h = h * 1000003u ^ std::hash<aimg::i64>{}(v);
    return h;
  }
};
