#ifndef WEILSURF_JACOBIAN_HPP
#define WEILSURF_JACOBIAN_HPP

// Which Weil polynomials of abelian surfaces come from Jacobians of genus-2
// curves. A simple surface is excluded by a short list of (a, b) shapes; a
// split surface (X^2 - sX + q)(X^2 - tX + q) is excluded by conditions on
// (s, t) that are grouped by p-rank. Rows listed without a p-rank apply to
// every p-rank; the others only to their own.

#include <algorithm>

#include "weilsurf/weil.hpp"

namespace weilsurf {

inline bool simple_non_jacobian_unchecked(const WeilCoeffs& w) {
  const Int p = w.q.p();
  const Int q = w.q.q();
  const bool square = w.q.is_square();
  const Int a = w.a;
  const Int b = w.b;

  if (a * a - b == q && b < 0) {
    const auto primes = prime_divisors(b);
    if (std::all_of(primes.begin(), primes.end(), [](Int r) { return r % 3 == 1; })) return true;
  }
  if (a != 0) return false;
  if (b == 1 - 2 * q) return true;
  if (b == 2 - 2 * q && p > 2) return true;
  if (b == -q) {
    if (p % 12 == 11 && square) return true;
    if (p == 3 && square) return true;
    if (p == 2 && !square) return true;
  }
  if (b == -2 * q && (q == 2 || q == 3)) return true;
  return false;
}

/// Exclusion test for simple surfaces.
inline bool simple_non_jacobian(const WeilCoeffs& w) {
  const auto v = admissibility(w);
  if (!v.admissible) throw NotAdmissible("simple_non_jacobian needs a Weil polynomial");
  if (!*v.simple) throw NotSimple("simple_non_jacobian needs a simple surface");
  return simple_non_jacobian_unchecked(w);
}

/// Exclusion test for split surfaces with normalized (s, t).
inline bool split_non_jacobian(const PrimePower& pq, const SplitForm& st, int p_rank) {
  const Int p = pq.p();
  const Int q = pq.q();
  const bool square = pq.is_square();
  const Int s = st.s;
  const Int t = st.t;

  if (p_rank < 0 || p_rank > 2) throw std::invalid_argument("p-rank must be 0, 1 or 2");
  if (abs_int(s - t) == 1) return true;

  switch (p_rank) {
    case 2: {
      const Int d = t * t - 4 * q;
      if (s == t && (d == -3 || d == -4 || d == -7)) return true;
      if (q == 2 && s == 1 && t == -1) return true;
      return false;
    }
    case 1:
      return square && s * s == 4 * q && s != t && is_squarefree(s - t);
    case 0: {
      if (p > 3 && s * s != t * t) return true;
      if (p == 3 && !square && s * s == 3 * q && t * t == 3 * q) return true;
      if (p == 3 && square && (s - t) % (3 * pq.sqrt_q()) != 0) return true;
      if (p == 2 && (s * s - t * t) % (2 * q) != 0) return true;
      if ((q == 2 || q == 3) && s == t) return true;
      if ((q == 4 || q == 9) && s * s == 4 * q && t * t == 4 * q) return true;
      return false;
    }
  }
  return false;
}

inline bool is_jacobian(const WeilCoeffs& w) {
  const auto v = admissibility(w);
  if (!v.admissible) throw NotAdmissible("is_jacobian needs a Weil polynomial");
  if (*v.simple) return !simple_non_jacobian_unchecked(w);
  const auto st = split(w);
  if (!st) throw std::logic_error("non-simple Weil polynomial without an integral splitting");
  return !split_non_jacobian(w.q, *st, *v.p_rank);
}

}  // namespace weilsurf

#endif  // WEILSURF_JACOBIAN_HPP
