#ifndef WEILSURF_ARITH_HPP
#define WEILSURF_ARITH_HPP

// Exact integer and p-adic helpers. Nothing here touches floating point
// except as a first guess for the integer square root, which is then
// corrected exactly.

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "weilsurf/error.hpp"

namespace weilsurf {

using Int = std::int64_t;

inline Int abs_int(Int n) { return n < 0 ? -n : n; }

/// Non-negative residue of n modulo m (m > 0).
inline Int mod_floor(Int n, Int m) {
  Int r = n % m;
  return r < 0 ? r + m : r;
}

inline Int pow_int(Int base, unsigned exp) {
  Int r = 1;
  while (exp-- > 0) {
    if (__builtin_mul_overflow(r, base, &r)) {
      throw std::overflow_error("pow_int overflow");
    }
  }
  return r;
}

inline Int pow_mod(Int base, Int exp, Int m) {
  __int128 r = 1;
  __int128 b = mod_floor(base, m);
  while (exp > 0) {
    if (exp & 1) r = (r * b) % m;
    b = (b * b) % m;
    exp >>= 1;
  }
  return static_cast<Int>(r);
}

/// floor(sqrt(n)) for n >= 0.
inline Int isqrt(Int n) {
  if (n < 0) throw std::domain_error("isqrt of negative value");
  auto z = static_cast<Int>(std::sqrt(static_cast<long double>(n)));
  while (z > 0 && z * z > n) --z;
  while ((z + 1) * (z + 1) <= n) ++z;
  return z;
}

inline bool is_prime(Int n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// A field size q = p^m with p prime and m >= 1.
class PrimePower {
 public:
  PrimePower() = default;

  Int p() const { return p_; }
  unsigned m() const { return m_; }
  Int q() const { return q_; }

  bool is_square() const { return m_ % 2 == 0; }

  /// p^(m/2); only meaningful when is_square().
  Int sqrt_q() const {
    if (!is_square()) throw std::logic_error("sqrt_q of a non-square prime power");
    return pow_int(p_, m_ / 2);
  }

  friend bool operator==(const PrimePower&, const PrimePower&) = default;

  static PrimePower from_parts(Int p, unsigned m) {
    if (!is_prime(p) || m == 0) {
      throw NotAPrimePower(std::to_string(p) + "^" + std::to_string(m));
    }
    PrimePower r;
    r.p_ = p;
    r.m_ = m;
    r.q_ = pow_int(p, m);
    return r;
  }

 private:
  Int p_ = 2;
  unsigned m_ = 1;
  Int q_ = 2;
};

inline PrimePower parse_prime_power(Int q) {
  if (q < 2) throw NotAPrimePower(std::to_string(q) + " is smaller than 2");
  Int p = q;
  for (Int d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  Int rest = q;
  unsigned m = 0;
  while (rest % p == 0) {
    rest /= p;
    ++m;
  }
  if (rest != 1) {
    throw NotAPrimePower(std::to_string(q) + " has more than one prime divisor");
  }
  return PrimePower::from_parts(p, m);
}

/// p-adic valuation; v(0) is infinite and compares above every finite value.
class Valuation {
 public:
  constexpr Valuation() = default;
  constexpr explicit Valuation(Int v) : v_(v) {}

  static constexpr Valuation infinity() { return Valuation(kInf); }

  constexpr bool is_infinite() const { return v_ == kInf; }
  constexpr Int value() const { return v_; }

  /// v >= num/den, exact.
  constexpr bool at_least(Int num, Int den = 1) const {
    return is_infinite() || v_ * den >= num;
  }

  friend constexpr auto operator<=>(const Valuation&, const Valuation&) = default;
  friend constexpr bool operator==(const Valuation&, const Valuation&) = default;
  friend constexpr bool operator==(Valuation x, Int n) { return x.v_ == n; }

  friend constexpr Valuation operator+(Valuation x, Valuation y) {
    if (x.is_infinite() || y.is_infinite()) return infinity();
    return Valuation(x.v_ + y.v_);
  }

 private:
  static constexpr Int kInf = std::numeric_limits<Int>::max();
  Int v_ = 0;
};

inline Valuation valuation(Int n, Int p) {
  if (n == 0) return Valuation::infinity();
  Int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return Valuation(e);
}

/// Root of n when n is a perfect square (n = z^2, z >= 0).
inline std::optional<Int> perfect_square_root(Int n) {
  if (n < 0) return std::nullopt;
  Int z = isqrt(n);
  if (z * z != n) return std::nullopt;
  return z;
}

inline bool is_perfect_square(Int n) { return perfect_square_root(n).has_value(); }

/// Whether the nonzero integer n is a square in the p-adic integers.
inline bool zp_is_square(Int p, Int n) {
  if (n == 0) throw ZeroInput("zp_is_square needs a nonzero argument");
  Int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  if (v % 2 != 0) return false;
  if (p == 2) return mod_floor(n, 8) == 1;
  return pow_mod(n, (p - 1) / 2, p) == 1;
}

inline bool is_squarefree(Int n) {
  if (n == 0) throw ZeroInput("is_squarefree(0)");
  n = abs_int(n);
  for (Int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return false;
    }
  }
  return true;
}

/// Distinct prime divisors of |n|, ascending.
inline std::vector<Int> prime_divisors(Int n) {
  if (n == 0) throw ZeroInput("prime_divisors(0)");
  n = abs_int(n);
  std::vector<Int> out;
  for (Int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// All prime powers in [2, limit], ascending.
inline std::vector<PrimePower> prime_powers_up_to(Int limit) {
  std::vector<PrimePower> out;
  for (Int q = 2; q <= limit; ++q) {
    try {
      out.push_back(parse_prime_power(q));
    } catch (const NotAPrimePower&) {
    }
  }
  return out;
}

}  // namespace weilsurf

#endif  // WEILSURF_ARITH_HPP
