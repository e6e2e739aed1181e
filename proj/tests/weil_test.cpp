#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "weilsurf/weil.hpp"

namespace weilsurf {
namespace {

using Cx = std::complex<long double>;

// Roots of X^4 + aX^3 + bX^2 + aqX + q^2 via y = X + q/X:
// y^2 + a y + (b - 2q) = 0, then X^2 - yX + q = 0 for each y.
std::vector<Cx> weil_roots(const WeilCoeffs& w) {
  const long double q = static_cast<long double>(w.q.q());
  const long double a = static_cast<long double>(w.a);
  const long double b = static_cast<long double>(w.b);
  const Cx d = std::sqrt(Cx(a * a - 4 * (b - 2 * q)));
  std::vector<Cx> out;
  for (const Cx y : {(-a + d) / 2.0L, (-a - d) / 2.0L}) {
    const Cx e = std::sqrt(y * y - 4 * q);
    out.push_back((y + e) / 2.0L);
    out.push_back((y - e) / 2.0L);
  }
  return out;
}

bool reversed_parity_split_condition(const WeilCoeffs& w) {
  // Same as the library test but with the a' - b' parity reversed.
  const Int p = w.q.p();
  const unsigned m = w.q.m();
  if (!valuation(w.b, p).at_least(m) || !valuation(w.a, p).at_least(m, 2)) return false;
  if (!is_perfect_square(w.discriminant())) return false;
  if (!w.q.is_square()) return true;
  const Int a1 = w.a / w.q.sqrt_q();
  const Int b1 = w.b / w.q.q();
  if (b1 == 2 && p % 4 == 1) return false;
  if (mod_floor(a1 - b1, 2) == 0 && p % 3 == 1) return false;
  return true;
}

TEST(BoundsOk, Examples) {
  EXPECT_FALSE(bounds_ok(make_weil(7, 1, -9)));
  EXPECT_TRUE(bounds_ok(make_weil(9, 1, -11)));
  EXPECT_TRUE(bounds_ok(make_weil(2, 0, 4)));
}

TEST(BoundsOk, AgreesWithFloatingPointInequalities) {
  std::mt19937_64 rng(2024);
  const auto qs = prime_powers_up_to(200);
  std::uniform_int_distribution<std::size_t> pick(0, qs.size() - 1);
  int checked = 0;
  for (int i = 0; i < 100000; ++i) {
    const PrimePower q = qs[pick(rng)];
    const Int amax = isqrt(16 * q.q()) + 2;
    const Int a = std::uniform_int_distribution<Int>(-amax, amax)(rng);
    const Int b = std::uniform_int_distribution<Int>(-3 * q.q(), 7 * q.q())(rng);
    const double r = std::sqrt(static_cast<double>(q.q()));
    const double lo = 2.0 * std::abs(static_cast<double>(a)) * r - 2.0 * q.q();
    const double hi = a * a / 4.0 + 2.0 * q.q();
    const double margins[] = {4.0 * r - std::abs(static_cast<double>(a)), b - lo, hi - b};
    constexpr double kMargin = 1e-9;
    bool near = false;
    bool inside = true;
    for (double m : margins) {
      near |= std::abs(m) < kMargin;
      inside &= m > 0;
    }
    if (near) continue;
    ++checked;
    ASSERT_EQ(bounds_ok({q, a, b}), inside) << q.q() << " " << a << " " << b;
  }
  EXPECT_GT(checked, 90000);
}

TEST(BoundsOk, EqualsDiscriminantCharacterization) {
  for (const auto& q : prime_powers_up_to(27)) {
    for (Int a = -30; a <= 30; ++a) {
      for (Int b = -3 * q.q(); b <= 4 * q.q() + 250; ++b) {
        const WeilCoeffs w{q, a, b};
        const bool expected = w.discriminant() >= 0 && w.factor_discriminant_product() >= 0 &&
                              a * a <= 16 * q.q() && b + 2 * q.q() >= 0;
        ASSERT_EQ(bounds_ok(w), expected);
      }
    }
  }
}

TEST(Conditions, Examples) {
  EXPECT_TRUE(ordinary_condition(make_weil(2, 0, 3)));
  EXPECT_FALSE(ordinary_condition(make_weil(2, 1, 0)));
  EXPECT_TRUE(p_rank_one_condition(make_weil(2, 1, 0)));
  EXPECT_EQ(make_weil(2, 1, 0).factor_discriminant_product(), 8);
  EXPECT_EQ(supersingular_table_row(make_weil(2, 0, -2)), TableRow::zero_minus_q);
}

TEST(Conditions, ZeroZeroOverF2IsSplitOnly) {
  // The (0,0) row needs p != 2 when q is a non-square.
  const auto w = make_weil(2, 0, 0);
  EXPECT_TRUE(supersingular_split_condition(w));
  EXPECT_FALSE(supersingular_table_row(w).has_value());
  const auto v = admissibility(w);
  EXPECT_TRUE(v.matched.contains(Condition::supersingular_split));
  EXPECT_FALSE(v.matched.contains(Condition::supersingular_table));
  EXPECT_EQ(v.p_rank, 0);
}

TEST(Conditions, TableRowsAndSplitConditionAreDisjoint) {
  for (const auto& q : prime_powers_up_to(200)) {
    for_each_bounded(q, [&](const WeilCoeffs& w) {
      ASSERT_FALSE(supersingular_split_condition(w) && supersingular_table_row(w).has_value())
          << q.q() << " " << w.a << " " << w.b;
    });
  }
}

TEST(Conditions, ReversedParityWouldOverlapWithTable) {
  // (2 sqrt(q), 3q) with p = 7: Delta = 0 and a' - b' is odd.
  const auto w = make_weil(49, 14, 147);
  EXPECT_EQ(supersingular_table_row(w), TableRow::two_sqrt_q_three_q);
  EXPECT_FALSE(supersingular_split_condition(w));
  EXPECT_TRUE(reversed_parity_split_condition(w));
}

TEST(Admissibility, Examples) {
  const auto v1 = admissibility(make_weil(4, 0, -1));
  EXPECT_TRUE(v1.admissible);
  EXPECT_TRUE(v1.matched.contains(Condition::ordinary));
  EXPECT_EQ(v1.p_rank, 2);

  const auto v2 = admissibility(make_weil(2, -1, 2));
  EXPECT_TRUE(v2.admissible);
  EXPECT_TRUE(v2.matched.contains(Condition::p_rank_one));
  EXPECT_FALSE(v2.matched.contains(Condition::ordinary));
  EXPECT_EQ(v2.p_rank, 1);

  const auto w3 = make_weil(25, -1, 25);
  EXPECT_EQ(w3.factor_discriminant_product(), 5525);
  EXPECT_TRUE(zp_is_square(5, 5525));
  EXPECT_FALSE(is_admissible(w3));
}

TEST(IsSimple, Examples) {
  EXPECT_TRUE(is_simple(make_weil(13, 9, 42)));
  EXPECT_FALSE(is_simple(make_weil(2, -2, 5)));
  EXPECT_TRUE(is_simple(make_weil(2, 1, 0)));
  EXPECT_THROW(is_simple(make_weil(25, -1, 25)), NotAdmissible);
}

TEST(Split, Examples) {
  EXPECT_EQ(split(make_weil(4, 0, -1)), (SplitForm{3, -3}));
  EXPECT_EQ(split(make_weil(2, -1, 2)), (SplitForm{2, -1}));
  EXPECT_FALSE(split(make_weil(5, 0, -1)).has_value());
}

TEST(GroupOrder, Examples) {
  EXPECT_EQ(group_order(make_weil(5, 8, 26)), 100);
  EXPECT_EQ(group_order(make_weil(3, 1, 4)), 18);
  for (Int q : {2, 3, 4, 5, 7, 8, 9, 49, 169}) EXPECT_EQ(group_order(make_weil(q, 0, -1)), q * q);
}

TEST(PredictedCurveCount, Examples) {
  EXPECT_EQ(predicted_curve_count(make_weil(3, 1, 4), 1), 5);
  EXPECT_EQ(predicted_curve_count(make_weil(3, 1, 4), 2), 17);
  for (Int b = -4; b <= 8; ++b) EXPECT_EQ(predicted_curve_count(make_weil(2, 0, b), 1), 3);
}

TEST(PredictedCurveCount, MatchesNumericalPowerSums) {
  for (const auto& q : prime_powers_up_to(13)) {
    for_each_bounded(q, [&](const WeilCoeffs& w) {
      const auto roots = weil_roots(w);
      for (unsigned k = 1; k <= 4; ++k) {
        Cx sum = 0;
        for (const auto& r : roots) sum += std::pow(r, static_cast<int>(k));
        const Int qk = pow_int(q.q(), k);
        EXPECT_NEAR(static_cast<double>(predicted_curve_count(w, k)),
                    static_cast<double>(qk + 1 - sum.real()), 1e-3);
      }
    });
  }
}

// Exhaustive properties over every prime power up to 27 and the bound rectangle.
class SmallQ : public ::testing::TestWithParam<Int> {};

TEST_P(SmallQ, ConditionGroupsNeverConflict) {
  const PrimePower q = parse_prime_power(GetParam());
  for_each_bounded(q, [&](const WeilCoeffs& w) {
    const int groups = ordinary_condition(w) + p_rank_one_condition(w) +
                       (supersingular_split_condition(w) || supersingular_table_row(w).has_value());
    ASSERT_LE(groups, 1) << w.a << " " << w.b;
  });
}

TEST_P(SmallQ, RootsLieOnTheCircleOfRadiusSqrtQ) {
  const PrimePower q = parse_prime_power(GetParam());
  for_each_bounded(q, [&](const WeilCoeffs& w) {
    if (!is_admissible(w)) return;
    for (const auto& r : weil_roots(w)) ASSERT_LT(std::abs(std::norm(r) - q.q()), 1e-6L);
  });
}

TEST_P(SmallQ, SplitRoundTrips) {
  const PrimePower q = parse_prime_power(GetParam());
  for_each_bounded(q, [&](const WeilCoeffs& w) {
    const auto st = split(w);
    if (!st) return;
    ASSERT_EQ(-(st->s + st->t), w.a);
    ASSERT_EQ(st->s * st->t + 2 * q.q(), w.b);
    ASSERT_GE(abs_int(st->s), abs_int(st->t));
    if (st->s == -st->t) {
      ASSERT_GE(st->s, 0);
    }
    ASSERT_EQ(group_order(w), (1 - st->s + q.q()) * (1 - st->t + q.q()));
  });
}

TEST_P(SmallQ, GroupOrderBounds) {
  const PrimePower q = parse_prime_power(GetParam());
  const Int r = isqrt(q.q());
  const Int lo = pow_int(r - 1, 4);
  const Int hi = pow_int(r + 2, 4);
  for_each_bounded(q, [&](const WeilCoeffs& w) {
    if (!is_admissible(w)) return;
    const Int n = group_order(w);
    ASSERT_GT(n, 0);
    ASSERT_GE(n, lo);
    ASSERT_LE(n, hi);
  });
}

TEST_P(SmallQ, ParityVariantIsImmaterial) {
  const PrimePower q = parse_prime_power(GetParam());
  if (q.is_square()) {
    EXPECT_NE(q.p() % 3, 1);
  }
  for_each_bounded(q, [&](const WeilCoeffs& w) {
    ASSERT_EQ(supersingular_split_condition(w), reversed_parity_split_condition(w)) << w.a << " " << w.b;
  });
}

TEST_P(SmallQ, PRankMatchesConditionGroup) {
  const PrimePower q = parse_prime_power(GetParam());
  for_each_bounded(q, [&](const WeilCoeffs& w) {
    const auto v = admissibility(w);
    if (!v.admissible) {
      ASSERT_TRUE(v.matched.empty());
      return;
    }
    const int expected = v.matched.contains(Condition::ordinary)     ? 2
                         : v.matched.contains(Condition::p_rank_one) ? 1
                                                                     : 0;
    ASSERT_EQ(v.p_rank, expected);
    if (!*v.simple) {
      ASSERT_TRUE(split(w).has_value());
    }
  });
}

INSTANTIATE_TEST_SUITE_P(PrimePowersUpTo27, SmallQ,
                         ::testing::Values(2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27));

}  // namespace
}  // namespace weilsurf
