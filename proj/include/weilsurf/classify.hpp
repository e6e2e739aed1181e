#ifndef WEILSURF_CLASSIFY_HPP
#define WEILSURF_CLASSIFY_HPP

// Isogeny classes of abelian surfaces whose group order is divisible by a
// power of q, by brute enumeration and by closed form.

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "weilsurf/jacobian.hpp"

namespace weilsurf {

using CoeffPair = std::pair<Int, Int>;

struct ClassificationRecord {
  PrimePower q;
  Int a = 0;
  Int b = 0;
  bool admissible = false;
  ConditionSet matched;
  std::optional<TableRow> table_row;
  std::optional<int> p_rank;
  std::optional<bool> simple;
  std::optional<SplitForm> split;
  Int order = 0;
  std::optional<Int> c;  // order / q^2 when q^2 divides order
  std::optional<bool> jacobian;
};

inline ClassificationRecord classify_record(const PrimePower& q, Int a, Int b) {
  const WeilCoeffs w{q, a, b};
  const auto v = admissibility(w);
  ClassificationRecord r;
  r.q = q;
  r.a = a;
  r.b = b;
  r.order = group_order(w);
  const Int q2 = q.q() * q.q();
  if (r.order % q2 == 0) r.c = r.order / q2;
  if (!v.admissible) return r;

  r.admissible = true;
  r.matched = v.matched;
  r.table_row = v.table_row;
  r.p_rank = v.p_rank;
  r.simple = v.simple;
  r.split = weilsurf::split(w);
  r.jacobian = is_jacobian(w);
  return r;
}

inline ClassificationRecord classify_record(Int q, Int a, Int b) {
  return classify_record(parse_prime_power(q), a, b);
}

/// Admissible classes with q^k | #J(F_q), sorted by (a, b).
inline std::vector<ClassificationRecord> enumerate_order_divisible(const PrimePower& q, unsigned k) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  std::vector<ClassificationRecord> out;
  Int modulus = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (__builtin_mul_overflow(modulus, q.q(), &modulus)) return out;
  }
  for_each_bounded(q, [&](const WeilCoeffs& w) {
    if (group_order(w) % modulus != 0) return;
    if (!is_admissible(w)) return;
    out.push_back(classify_record(q, w.a, w.b));
  });
  return out;
}

inline std::vector<ClassificationRecord> enumerate_order_divisible(Int q, unsigned k) {
  return enumerate_order_divisible(parse_prime_power(q), k);
}

/// Sporadic classes with c > 1, keyed by q.
inline const std::map<Int, std::vector<CoeffPair>>& sporadic_square_order_classes() {
  static const std::map<Int, std::vector<CoeffPair>> table{
      {13, {{9, 42}}},
      {9, {{6, 20}}},
      {7, {{4, 16}}},
      {5, {{3, 6}, {8, 26}}},
      {4, {{2, 5}, {4, 11}, {6, 17}}},
      {3, {{1, 4}, {3, 5}, {4, 10}}},
      {2, {{0, 3}, {1, 0}, {1, 4}, {2, 5}, {3, 6}}},
  };
  return table;
}

/// Closed-form list of the (a, b) with q^2 | #J(F_q), sorted.
inline std::vector<CoeffPair> square_order_classes(const PrimePower& pq) {
  const Int q = pq.q();
  const Int p = pq.p();
  std::vector<CoeffPair> out;
  if (q % 2 == 1 && q > 8) out.emplace_back(1, -(q + 2));
  out.emplace_back(0, -1);
  if (pq.m() % 2 == 1 || p % 4 != 1) out.emplace_back(-1, q);
  out.emplace_back(-2, 2 * q + 1);
  const auto& table = sporadic_square_order_classes();
  if (auto it = table.find(q); it != table.end()) {
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<CoeffPair> square_order_classes(Int q) {
  return square_order_classes(parse_prime_power(q));
}

/// Closed-form list of the square-order classes that are not Jacobian classes.
inline std::set<CoeffPair> square_order_non_jacobians(Int q) {
  switch (q) {
    case 5: return {{8, 26}};
    case 4: return {{6, 17}};
    case 2: return {{-2, 5}, {0, 3}, {1, 4}, {2, 5}, {3, 6}};
    default: return {};
  }
}

/// Every admissible Jacobian class over F_q.
inline std::set<CoeffPair> jacobian_classes(const PrimePower& q) {
  std::set<CoeffPair> out;
  for_each_bounded(q, [&](const WeilCoeffs& w) {
    if (is_admissible(w) && is_jacobian(w)) out.emplace(w.a, w.b);
  });
  return out;
}

}  // namespace weilsurf

#endif  // WEILSURF_CLASSIFY_HPP
