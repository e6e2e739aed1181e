#include <gtest/gtest.h>

#include <algorithm>

#include "weilsurf/classify.hpp"

namespace weilsurf {
namespace {

std::vector<CoeffPair> pairs(const std::vector<ClassificationRecord>& recs) {
  std::vector<CoeffPair> out;
  for (const auto& r : recs) out.emplace_back(r.a, r.b);
  return out;
}

TEST(ClassifyRecord, SplitPRankOneExample) {
  const auto r = classify_record(2, -1, 2);
  EXPECT_TRUE(r.admissible);
  EXPECT_TRUE(r.matched.contains(Condition::p_rank_one));
  EXPECT_EQ(r.p_rank, 1);
  EXPECT_EQ(r.simple, false);
  EXPECT_EQ(r.split, (SplitForm{2, -1}));
  EXPECT_EQ(r.order, 4);
  EXPECT_EQ(r.c, 1);
  EXPECT_EQ(r.jacobian, true);
}

TEST(ClassifyRecord, SimplePRankOneExample) {
  const auto r = classify_record(2, 1, 0);
  EXPECT_TRUE(r.admissible);
  EXPECT_TRUE(r.matched.contains(Condition::p_rank_one));
  EXPECT_EQ(r.p_rank, 1);
  EXPECT_EQ(r.simple, true);
  EXPECT_FALSE(r.split.has_value());
  EXPECT_EQ(r.order, 8);
  EXPECT_EQ(r.c, 2);
  EXPECT_EQ(r.jacobian, true);
}

TEST(ClassifyRecord, Errors) { EXPECT_THROW(classify_record(12, 0, 0), NotAPrimePower); }

TEST(ClassifyRecord, InadmissibleRecordHasNoDerivedFields) {
  const auto r = classify_record(25, -1, 25);
  EXPECT_FALSE(r.admissible);
  EXPECT_FALSE(r.p_rank.has_value());
  EXPECT_FALSE(r.jacobian.has_value());
  EXPECT_EQ(r.order, 1 - 1 + 25 - 25 + 625);
}

TEST(EnumerateOrderDivisible, Examples) {
  EXPECT_EQ(pairs(enumerate_order_divisible(13, 2)),
            (std::vector<CoeffPair>{{-2, 27}, {-1, 13}, {0, -1}, {1, -15}, {9, 42}}));
  EXPECT_EQ(pairs(enumerate_order_divisible(2, 2)),
            (std::vector<CoeffPair>{{-2, 5}, {-1, 2}, {0, -1}, {0, 3}, {1, 0}, {1, 4}, {2, 5}, {3, 6}}));
  EXPECT_EQ(pairs(enumerate_order_divisible(7, 2)), (std::vector<CoeffPair>{{-2, 15}, {-1, 7}, {0, -1}, {4, 16}}));
  EXPECT_EQ(pairs(enumerate_order_divisible(49, 2)),
            (std::vector<CoeffPair>{{-2, 99}, {-1, 49}, {0, -1}, {1, -51}}));
  EXPECT_THROW(enumerate_order_divisible(4, 0), std::invalid_argument);
}

TEST(SquareOrderClasses, Examples) {
  EXPECT_EQ(square_order_classes(9), (std::vector<CoeffPair>{{-2, 19}, {-1, 9}, {0, -1}, {1, -11}, {6, 20}}));
  EXPECT_EQ(square_order_classes(25), (std::vector<CoeffPair>{{-2, 51}, {0, -1}, {1, -27}}));
  EXPECT_EQ(square_order_classes(8), (std::vector<CoeffPair>{{-2, 17}, {-1, 8}, {0, -1}}));
}

TEST(SquareOrderNonJacobians, Examples) {
  EXPECT_EQ(square_order_non_jacobians(5), (std::set<CoeffPair>{{8, 26}}));
  EXPECT_EQ(square_order_non_jacobians(2), (std::set<CoeffPair>{{-2, 5}, {0, 3}, {1, 4}, {2, 5}, {3, 6}}));
  EXPECT_TRUE(square_order_non_jacobians(13).empty());
}

TEST(SquareOrderClasses, ClosedFormMatchesEnumerationUpTo200) {
  const auto qs = prime_powers_up_to(200);
  ASSERT_EQ(qs.size(), 60u);
  for (const auto& q : qs) EXPECT_EQ(pairs(enumerate_order_divisible(q, 2)), square_order_classes(q)) << q.q();
}

TEST(SquareOrderNonJacobians, MatchesEnumerationUpTo27) {
  for (const auto& q : prime_powers_up_to(27)) {
    std::set<CoeffPair> got;
    for (const auto& r : enumerate_order_divisible(q, 2)) {
      if (!*r.jacobian) got.emplace(r.a, r.b);
    }
    EXPECT_EQ(got, square_order_non_jacobians(q.q())) << q.q();
  }
}

// c q^2 <= (sqrt(q) + 1)^4 = q^2 + 6q + 1 + (4q + 4) sqrt(q), without floating point.
bool within_weil_bound(Int c, Int q) {
  const Int lhs = c * q * q - q * q - 6 * q - 1;
  if (lhs <= 0) return true;
  const Int k = 4 * q + 4;
  return lhs * lhs <= k * k * q;
}

TEST(EnumerateOrderDivisible, QuotientBoundedByWeilBound) {
  for (const auto& q : prime_powers_up_to(200)) {
    for (const auto& r : enumerate_order_divisible(q, 2)) {
      ASSERT_TRUE(r.c.has_value());
      EXPECT_EQ(*r.c * q.q() * q.q(), r.order);
      EXPECT_TRUE(within_weil_bound(*r.c, q.q())) << q.q() << " c=" << *r.c;
      if (q.q() > 27) {
        EXPECT_EQ(*r.c, 1);
      }
    }
  }
}

TEST(EnumerateOrderDivisible, MonotoneInK) {
  for (const auto& q : prime_powers_up_to(50)) {
    const auto k1 = pairs(enumerate_order_divisible(q, 1));
    const auto k2 = pairs(enumerate_order_divisible(q, 2));
    EXPECT_TRUE(std::includes(k1.begin(), k1.end(), k2.begin(), k2.end())) << q.q();
  }
}

TEST(EnumerateOrderDivisible, RecordsAreConsistent) {
  for (const auto& q : prime_powers_up_to(27)) {
    for (const auto& r : enumerate_order_divisible(q, 1)) {
      ASSERT_TRUE(r.admissible);
      ASSERT_EQ(r.order % q.q(), 0);
      ASSERT_EQ(r.order, group_order({q, r.a, r.b}));
      ASSERT_EQ(r.split.has_value(), is_perfect_square(WeilCoeffs{q, r.a, r.b}.discriminant()));
    }
  }
}

TEST(JacobianClasses, ContainsOnlyAdmissibleClasses) {
  const auto q = parse_prime_power(5);
  const auto jac = jacobian_classes(q);
  EXPECT_FALSE(jac.count({8, 26}));
  EXPECT_TRUE(jac.count({3, 6}));
  for (const auto& [a, b] : jac) EXPECT_TRUE(is_admissible({q, a, b}));
}

}  // namespace
}  // namespace weilsurf
