#ifndef WEILSURF_VERIFY_HPP
#define WEILSURF_VERIFY_HPP

// The self-check run by `weilsurf verify`.

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "weilsurf/census.hpp"

namespace weilsurf {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;  // appended verbatim after the status word
  std::string subject; // optional word(s) printed before the status word

  std::string line() const {
    return name + ": " + (subject.empty() ? "" : subject + " ") + (ok ? "OK" : "FAIL") + detail;
  }
};

struct VerifyOptions {
  Int qmax = 200;
  bool deep = false;
  unsigned jobs = 1;
};

namespace detail {

inline std::string pair_list(const std::vector<CoeffPair>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << '(' << v[i].first << ',' << v[i].second << ')';
  return os.str();
}

}  // namespace detail

/// Closed form against brute enumeration for every prime power up to qmax.
inline CheckResult check_square_order(Int qmax) {
  CheckResult r{"square-order q<=" + std::to_string(qmax), true, "", ""};
  std::size_t n = 0;
  for (const auto& q : prime_powers_up_to(qmax)) {
    ++n;
    std::vector<CoeffPair> brute;
    for (const auto& rec : enumerate_order_divisible(q, 2)) brute.emplace_back(rec.a, rec.b);
    const auto closed = square_order_classes(q);
    if (brute != closed) {
      r.ok = false;
      r.detail = " q=" + std::to_string(q.q()) + " brute " + detail::pair_list(brute) + " closed " +
                 detail::pair_list(closed);
      return r;
    }
  }
  r.detail = " (" + std::to_string(n) + " prime powers)";
  return r;
}

/// Non-Jacobian square-order classes against the closed-form exclusion list.
inline CheckResult check_jacobian_exclusions(Int qmax) {
  CheckResult r{"jacobian-exclusions q<=" + std::to_string(qmax), true, "", ""};
  for (const auto& q : prime_powers_up_to(qmax)) {
    std::set<CoeffPair> non_jac;
    for (const auto& rec : enumerate_order_divisible(q, 2)) {
      if (!*rec.jacobian) non_jac.emplace(rec.a, rec.b);
    }
    if (non_jac != square_order_non_jacobians(q.q())) {
      r.ok = false;
      r.detail = " q=" + std::to_string(q.q()) + " got " +
                 detail::pair_list({non_jac.begin(), non_jac.end()});
      return r;
    }
  }
  return r;
}

/// delta(q, -1, q) = 9q^2 - 4q is 28, 128, 544 at q = 2, 4, 8 and never a 2-adic square.
inline CheckResult check_delta_spot_values() {
  CheckResult r{"delta spot values", true, "", ""};
  const std::array<std::pair<Int, Int>, 3> expected{{{2, 28}, {4, 128}, {8, 544}}};
  for (const auto& [q, want] : expected) {
    const auto w = make_weil(q, -1, q);
    const Int got = w.factor_discriminant_product();
    if (got != want || got != 9 * q * q - 4 * q || zp_is_square(2, got)) {
      r.ok = false;
      r.detail = " q=" + std::to_string(q) + " delta=" + std::to_string(got);
      return r;
    }
  }
  return r;
}

inline CheckResult check_split_spot_values() {
  CheckResult r{"split spot values", true, "", ""};
  const auto w1 = make_weil(4, 0, -1);
  const auto w2 = make_weil(2, -1, 2);
  const bool ok = split(w1) == SplitForm{3, -3} && split(w2) == SplitForm{2, -1} &&
                  admissibility(w1).p_rank == 2 && admissibility(w2).p_rank == 1;
  r.ok = ok;
  return r;
}

inline CheckResult check_census_classification(Int q, unsigned jobs) {
  CheckResult r{"census q=" + std::to_string(q), false, "", "set equality"};
  try {
    const CurveFields fields(parse_prime_power(q));
    const CensusResult census = run_census(fields, jobs);
    const CensusReport rep = check_census(fields, census);
    if (!rep.ok()) {
      r.detail = " missing " + detail::pair_list(rep.missing) + " unexpected " + detail::pair_list(rep.unexpected) +
                 " zeta failures " + std::to_string(rep.zeta_failures.size());
      return r;
    }
    r.ok = true;
    std::vector<CoeffPair> excluded;
    for (const auto& ab : square_order_non_jacobians(q)) {
      if (census.realizes(ab.first, ab.second)) {
        r.ok = false;
        r.detail = " realizes excluded class " + detail::pair_list({ab});
        return r;
      }
      excluded.push_back(ab);
    }
    if (!excluded.empty()) r.detail = ", " + detail::pair_list(excluded) + " excluded";
  } catch (const Error& e) {
    r.detail = std::string(" ") + e.what();
  }
  return r;
}

/// Runs every check, streaming each result to `sink` as it completes.
inline std::vector<CheckResult> run_verification(const VerifyOptions& opts,
                                                 const std::function<void(const CheckResult&)>& sink = {}) {
  std::vector<CheckResult> results;
  auto emit = [&](CheckResult r) {
    if (sink) sink(r);
    results.push_back(std::move(r));
  };
  emit(check_square_order(opts.qmax));
  emit(check_jacobian_exclusions(std::min<Int>(opts.qmax, 27)));
  emit(check_delta_spot_values());
  emit(check_split_spot_values());
  if (opts.deep) {
    for (Int q : default_census_qs()) emit(check_census_classification(q, opts.jobs));
  }
  return results;
}

}  // namespace weilsurf

#endif  // WEILSURF_VERIFY_HPP
