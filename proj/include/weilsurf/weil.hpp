#ifndef WEILSURF_WEIL_HPP
#define WEILSURF_WEIL_HPP

// Weil polynomials of abelian surfaces over F_q, written as
//   P(X) = X^4 + a X^3 + b X^2 + a q X + q^2.
//
// Admissibility follows the Rueck/Waterhouse description: coefficient bounds
// plus one of four arithmetic conditions, which also fix the p-rank.
// Every comparison against sqrt(q) is squared out into exact integers.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "weilsurf/arith.hpp"

namespace weilsurf {

struct WeilCoeffs {
  PrimePower q;
  Int a = 0;
  Int b = 0;

  /// Delta = a^2 - 4(b - 2q): discriminant of X^2 + aX + (b - 2q), the
  /// polynomial whose roots are the traces s, t of a splitting.
  Int discriminant() const { return a * a - 4 * (b - 2 * q.q()); }

  /// delta = (b + 2q)^2 - 4qa^2: product of the discriminants of the two
  /// quadratic factors X^2 - yX + q over the reals.
  Int factor_discriminant_product() const {
    const Int s = b + 2 * q.q();
    return s * s - 4 * q.q() * a * a;
  }

  friend bool operator==(const WeilCoeffs&, const WeilCoeffs&) = default;
};

inline WeilCoeffs make_weil(Int q, Int a, Int b) { return {parse_prime_power(q), a, b}; }

/// P = (X^2 - sX + q)(X^2 - tX + q) with |s| >= |t| and s >= 0 when s = -t.
struct SplitForm {
  Int s = 0;
  Int t = 0;
  friend bool operator==(const SplitForm&, const SplitForm&) = default;
};

/// Condition families under which a coefficient pair is a Weil polynomial.
enum class Condition : unsigned {
  ordinary = 1u << 0,             // v_p(b) = 0; p-rank 2
  p_rank_one = 1u << 1,           // v_p(a) = 0, v_p(b) >= m/2, delta test; p-rank 1
  supersingular_split = 1u << 2,  // Delta a square, q-divisibility; p-rank 0
  supersingular_table = 1u << 3,  // one of the nine exceptional rows; p-rank 0
};

/// Rows of the exceptional supersingular table, by (a, b) shape.
enum class TableRow {
  zero_zero,           // (0, 0)
  zero_minus_q,        // (0, -q)
  zero_q,              // (0, q)
  zero_minus_two_q,    // (0, -2q)
  zero_two_q,          // (0, 2q)
  sqrt_q_q,            // (+-sqrt(q), q)
  sqrt_two_q_q,        // (+-sqrt(2q), q)
  two_sqrt_q_three_q,  // (+-2 sqrt(q), 3q)
  sqrt_five_q_three_q, // (+-sqrt(5q), 3q)
};

inline std::string_view to_string(TableRow row) {
  switch (row) {
    case TableRow::zero_zero: return "(0,0)";
    case TableRow::zero_minus_q: return "(0,-q)";
    case TableRow::zero_q: return "(0,q)";
    case TableRow::zero_minus_two_q: return "(0,-2q)";
    case TableRow::zero_two_q: return "(0,2q)";
    case TableRow::sqrt_q_q: return "(+-sqrt(q),q)";
    case TableRow::sqrt_two_q_q: return "(+-sqrt(2q),q)";
    case TableRow::two_sqrt_q_three_q: return "(+-2sqrt(q),3q)";
    case TableRow::sqrt_five_q_three_q: return "(+-sqrt(5q),3q)";
  }
  return "?";
}

class ConditionSet {
 public:
  void insert(Condition c) { bits_ |= static_cast<unsigned>(c); }
  bool contains(Condition c) const { return (bits_ & static_cast<unsigned>(c)) != 0; }
  bool empty() const { return bits_ == 0; }
  friend bool operator==(const ConditionSet&, const ConditionSet&) = default;

 private:
  unsigned bits_ = 0;
};

struct AdmissibilityVerdict {
  bool admissible = false;
  ConditionSet matched;
  std::optional<TableRow> table_row;
  std::optional<int> p_rank;
  std::optional<bool> simple;
};

/// |a| <= 4 sqrt(q) and 2|a| sqrt(q) - 2q <= b <= a^2/4 + 2q, exactly.
inline bool bounds_ok(const WeilCoeffs& w) {
  const Int q = w.q.q();
  return w.a * w.a <= 16 * q && 4 * w.b <= w.a * w.a + 8 * q && w.b + 2 * q >= 0 &&
         w.factor_discriminant_product() >= 0;
}

inline bool ordinary_condition(const WeilCoeffs& w) {
  return valuation(w.b, w.q.p()) == 0;
}

inline bool p_rank_one_condition(const WeilCoeffs& w) {
  const Int p = w.q.p();
  if (!valuation(w.b, p).at_least(w.q.m(), 2) || !(valuation(w.a, p) == 0)) return false;
  const Int delta = w.factor_discriminant_product();
  return delta == 0 || !zp_is_square(p, delta);
}

inline bool supersingular_split_condition(const WeilCoeffs& w) {
  const Int p = w.q.p();
  const unsigned m = w.q.m();
  if (!valuation(w.b, p).at_least(m) || !valuation(w.a, p).at_least(m, 2)) return false;
  if (!is_perfect_square(w.discriminant())) return false;
  if (!w.q.is_square()) return true;
  // a = sqrt(q) a', b = q b'
  const Int a1 = w.a / w.q.sqrt_q();
  const Int b1 = w.b / w.q.q();
  if (b1 == 2 && p % 4 == 1) return false;
  if (mod_floor(a1 - b1, 2) != 0 && p % 3 == 1) return false;
  return true;
}

inline std::optional<TableRow> supersingular_table_row(const WeilCoeffs& w) {
  const Int p = w.q.p();
  const unsigned m = w.q.m();
  const Int q = w.q.q();
  const bool square = w.q.is_square();
  const Int a = w.a;
  const Int b = w.b;
  const Int abs_a = abs_int(a);

  if (a == 0) {
    if (b == 0 && ((square && p % 8 != 1) || (!square && p != 2))) return TableRow::zero_zero;
    if (b == -q && ((square && p % 12 != 1) || (!square && p != 3))) return TableRow::zero_minus_q;
    if (b == q && !square) return TableRow::zero_q;
    if (b == -2 * q && !square) return TableRow::zero_minus_two_q;
    if (b == 2 * q && square && p % 4 == 1) return TableRow::zero_two_q;
    return std::nullopt;
  }
  if (square) {
    const Int r = w.q.sqrt_q();
    if (abs_a == r && b == q && p % 5 != 1) return TableRow::sqrt_q_q;
    if (abs_a == 2 * r && b == 3 * q && p % 3 == 1) return TableRow::two_sqrt_q_three_q;
    return std::nullopt;
  }
  const Int odd_root = pow_int(p, (m + 1) / 2);  // sqrt(pq)
  if (p == 2 && abs_a == odd_root && b == q) return TableRow::sqrt_two_q_q;
  if (p == 5 && abs_a == odd_root && b == 3 * q) return TableRow::sqrt_five_q_three_q;
  return std::nullopt;
}

/// Simplicity test; the caller guarantees admissibility.
inline bool simple_unchecked(const WeilCoeffs& w) {
  if (!is_perfect_square(w.discriminant())) return true;
  if (!w.q.is_square()) return false;
  const Int p = w.q.p();
  const Int q = w.q.q();
  if (w.a == 0 && w.b == 2 * q && p % 4 == 1) return true;
  if (abs_int(w.a) == 2 * w.q.sqrt_q() && w.b == 3 * q && p % 3 == 1) return true;
  return false;
}

inline AdmissibilityVerdict admissibility(const WeilCoeffs& w) {
  AdmissibilityVerdict v;
  if (!bounds_ok(w)) return v;
  if (ordinary_condition(w)) v.matched.insert(Condition::ordinary);
  if (p_rank_one_condition(w)) v.matched.insert(Condition::p_rank_one);
  if (supersingular_split_condition(w)) v.matched.insert(Condition::supersingular_split);
  v.table_row = supersingular_table_row(w);
  if (v.table_row) v.matched.insert(Condition::supersingular_table);
  if (v.matched.empty()) return v;

  v.admissible = true;
  if (v.matched.contains(Condition::ordinary)) {
    v.p_rank = 2;
  } else if (v.matched.contains(Condition::p_rank_one)) {
    v.p_rank = 1;
  } else {
    v.p_rank = 0;
  }
  v.simple = simple_unchecked(w);
  return v;
}

inline bool is_admissible(const WeilCoeffs& w) { return admissibility(w).admissible; }

inline bool is_simple(const WeilCoeffs& w) {
  if (!is_admissible(w)) throw NotAdmissible("is_simple needs a Weil polynomial");
  return simple_unchecked(w);
}

inline std::optional<SplitForm> split(const WeilCoeffs& w) {
  const auto z = perfect_square_root(w.discriminant());
  if (!z) return std::nullopt;
  // z and a have the same parity since Delta = a^2 mod 4.
  Int s = (-w.a + *z) / 2;
  Int t = (-w.a - *z) / 2;
  if (abs_int(s) < abs_int(t)) std::swap(s, t);
  if (s == -t && s < 0) std::swap(s, t);
  return SplitForm{s, t};
}

/// #J(F_q) = P(1).
inline Int group_order(const WeilCoeffs& w) {
  const Int q = w.q.q();
  return 1 + w.a + w.b + w.a * q + q * q;
}

/// Power sums of the Frobenius roots, p_1 .. p_k, via Newton's identities.
inline std::vector<Int> frobenius_power_sums(const WeilCoeffs& w, unsigned k) {
  const Int q = w.q.q();
  // P = X^4 - e1 X^3 + e2 X^2 - e3 X + e4
  const std::array<Int, 5> e{1, -w.a, w.b, -w.a * q, q * q};
  std::vector<Int> ps(k + 1, 0);
  auto mul = [](Int x, Int y) {
    Int r;
    if (__builtin_mul_overflow(x, y, &r)) throw std::overflow_error("power sum overflow");
    return r;
  };
  for (unsigned n = 1; n <= k; ++n) {
    Int acc = 0;
    for (unsigned i = 1; i < n && i <= 4; ++i) {
      const Int term = mul(e[i], ps[n - i]);
      acc += (i % 2 == 1) ? term : -term;
    }
    if (n <= 4) {
      const Int term = mul(static_cast<Int>(n), e[n]);
      acc += (n % 2 == 1) ? term : -term;
    }
    ps[n] = acc;
  }
  return ps;
}

/// Number of F_{q^k}-points on a genus-2 curve whose Jacobian has Weil polynomial w.
inline Int predicted_curve_count(const WeilCoeffs& w, unsigned k) {
  if (k == 0) throw std::invalid_argument("extension degree must be >= 1");
  const auto ps = frobenius_power_sums(w, k);
  return pow_int(w.q.q(), k) + 1 - ps[k];
}

/// Largest |a| allowed by the coefficient bounds.
inline Int max_abs_a(const PrimePower& q) { return isqrt(16 * q.q()); }

/// Visits every (a, b) satisfying the coefficient bounds, ordered by (a, b).
template <class Fn>
void for_each_bounded(const PrimePower& q, Fn&& fn) {
  const Int amax = max_abs_a(q);
  for (Int a = -amax; a <= amax; ++a) {
    const Int bmax = (a * a + 8 * q.q()) / 4;
    for (Int b = -2 * q.q(); b <= bmax; ++b) {
      const WeilCoeffs w{q, a, b};
      if (bounds_ok(w)) fn(w);
    }
  }
}

}  // namespace weilsurf

#endif  // WEILSURF_WEIL_HPP
