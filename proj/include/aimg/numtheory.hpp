#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "aimg/error.hpp"

namespace aimg {
using i64 = std::int64_t;
}

namespace aimg::nt {

using i64 = std::int64_t;

inline i64 mod(i64 a, i64 n) {
  i64 r = a % n;
  return r < 0 ? r + n : r;
}

inline i64 mulmod(i64 a, i64 b, i64 n) {
  return static_cast<i64>((static_cast<__int128>(a) * b) % n);
}

inline i64 powmod(i64 base, i64 exp, i64 n) {
  if (n == 1) return 0;
  i64 result = 1;
  base = mod(base, n);
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, n);
    base = mulmod(base, base, n);
    exp >>= 1;
  }
  return result;
}

inline i64 ipow(i64 base, int exp) {
  i64 r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

/// Extended Euclid: returns g = gcd(a, b) and x, y with ax + by = g.
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  i64 x1, y1;
  i64 g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

/// Inverse of a modulo n; throws NotInvertible when gcd(a, n) != 1.
inline i64 inv_mod(i64 a, i64 n) {
  if (n == 1) return 0;
  i64 x, y;
  i64 g = ext_gcd(mod(a, n), n, x, y);
  if (g != 1) throw Error(ErrorKind::NotInvertible, "residue has no inverse modulo " + std::to_string(n));
  return mod(x, n);
}

/// Solve r = a mod m, r = b mod n. Throws IncompatibleResidues if the two
/// residues disagree modulo gcd(m, n). Result lies in [0, lcm(m, n)).
inline i64 crt(i64 a, i64 m, i64 b, i64 n) {
  i64 x, y;
  i64 g = ext_gcd(m, n, x, y);
  if (mod(a - b, g) != 0) throw Error(ErrorKind::IncompatibleResidues, "residues disagree modulo gcd");
  i64 l = m / g * n;
  // r = a + m * t with m t = b - a (mod n)
  i64 t = mulmod(mod((b - a) / g, n / g), mod(x, n / g), n / g);
  return mod(a + m * t, l);
}

using Factorization = std::vector<std::pair<i64, int>>;

inline Factorization factorize(i64 n) {
  Factorization f;
  if (n < 0) n = -n;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

inline std::vector<i64> prime_divisors(i64 n) {
  std::vector<i64> ps;
  for (auto [p, e] : factorize(n)) ps.push_back(p);
  return ps;
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

inline int valuation(i64 n, i64 p) {
  int e = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

/// Sorted positive divisors.
inline std::vector<i64> divisors(i64 n) {
  std::vector<i64> ds{1};
  for (auto [p, e] : factorize(n)) {
    std::size_t sz = ds.size();
    i64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < sz; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

inline i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

/// |GL2(Z/nZ)|.
inline i64 gl2_order(i64 n) {
  i64 r = 1;
  for (auto [p, e] : factorize(n)) {
    i64 q = ipow(p, e);
    // q^4 (1 - 1/p)(1 - 1/p^2)
    r *= (q * q * q * q / (p * p * p)) * (p - 1) * (p * p - 1);
  }
  return r;
}

/// |SL2(Z/nZ)|.
inline i64 sl2_order(i64 n) {
  i64 r = 1;
  for (auto [p, e] : factorize(n)) {
    i64 q = ipow(p, e);
    r *= (q * q * q / (p * p)) * (p * p - 1);
  }
  return r;
}

/// Units of Z/nZ in increasing order (for n = 1 this is {0}).
inline std::vector<i64> units(i64 n) {
  std::vector<i64> us;
  if (n == 1) return {0};
  for (i64 a = 1; a < n; ++a)
    if (std::gcd(a, n) == 1) us.push_back(a);
  return us;
}

/// Kronecker symbol (a / n) for n > 0.
inline int kronecker(i64 a, i64 n) {
  if (n <= 0) throw Error(ErrorKind::ZeroInput, "kronecker symbol needs a positive modulus");
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    i64 r = mod(a, 8);
    if (r == 0 || r == 2 || r == 4 || r == 6) return 0;
    if (r == 3 || r == 5) result = -result;
  }
  a = mod(a, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      i64 r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

}  // namespace aimg::nt
