#ifndef WEILSURF_CENSUS_HPP
#define WEILSURF_CENSUS_HPP

// Exhaustive census of genus-2 curve models over small fields.
//
// Odd q:  y^2 = f(x), deg f in {5, 6}, f squarefree.
// q = 2^m: Y^2 + H(x,z) Y = F(x,z) in P(1,3,1), deg h <= 3, h != 0,
//          deg f <= 6, smooth.
//
// Each model is point-counted over F_q and F_{q^2}; the counts give the
// Weil coefficients (a, b). The census keeps the multiset of (a, b) only, so
// isomorphic models are counted repeatedly.

#include <algorithm>
#include <array>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "weilsurf/classify.hpp"
#include "weilsurf/smallfield.hpp"

namespace weilsurf {

struct CurveOdd {
  PrimePower q;
  std::array<Element, 7> f{};  // f[j] is the coefficient of x^j
};

struct CurveChar2 {
  PrimePower q;
  std::array<Element, 4> h{};
  std::array<Element, 7> f{};
};

using Curve = std::variant<CurveOdd, CurveChar2>;

struct CensusRecord {
  std::uint64_t id = 0;
  Int n1 = 0;
  Int n2 = 0;
  Int a = 0;
  Int b = 0;
};

inline const std::set<Int>& default_census_qs() {
  static const std::set<Int> qs{2, 3, 5, 7, 9};
  return qs;
}

inline const std::set<Int>& extended_census_qs() {
  static const std::set<Int> qs{4, 13};
  return qs;
}

inline PrimePower check_census_q(Int q, bool allow_extended) {
  if (default_census_qs().count(q) || (allow_extended && extended_census_qs().count(q))) {
    return parse_prime_power(q);
  }
  std::string msg = "census does not support q=" + std::to_string(q);
  if (extended_census_qs().count(q)) msg += " without the extended option";
  throw UnsupportedQ(msg);
}

/// F_q together with the extensions F_{q^k} the census needs.
class CurveFields {
 public:
  explicit CurveFields(const PrimePower& q) : q_(q) {
    base_ = Field::base_field(q.p(), q.m());
    ext_[1] = base_;
    ext_[2] = Field::extend(base_, 2);
    ext_[3] = Field::extend(base_, 3);
  }

  const PrimePower& q() const { return q_; }
  const Field& base() const { return *base_; }

  /// F_{q^k}, built on first use for k outside {1, 2, 3}.
  const Field& extension(unsigned k) const {
    if (k == 0 || k >= ext_.size()) throw std::invalid_argument("unsupported extension degree");
    std::lock_guard lock(mu_);
    if (!ext_[k]) ext_[k] = Field::extend(base_, k);
    return *ext_[k];
  }

 private:
  PrimePower q_;
  FieldPtr base_;
  mutable std::array<FieldPtr, 7> ext_{};
  mutable std::mutex mu_;
};

namespace detail {

inline Poly to_poly(std::span<const Element> c) {
  Poly f(c.begin(), c.end());
  poly_trim(f);
  return f;
}

/// Number of (y) in K with y^2 + h y = c, for h, c in K, char 2.
inline Int artin_schreier_solutions(const Field& K, Element h, Element c) {
  if (h.v == 0) return 1;
  const Element t = K.div(c, K.mul(h, h));
  return K.absolute_trace(t) == 0 ? 2 : 0;
}

/// Singular point test for Y^2 + H Y = F at the roots u of H, in one affine chart.
inline bool chart_singular_at(const Field& K, const Poly& h, const Poly& f, Element u) {
  const Element v = K.sqrt_char2(poly_eval(K, f, u));
  const Element hp = poly_eval(K, poly_derivative(K, h), u);
  const Element fp = poly_eval(K, poly_derivative(K, f), u);
  return K.add(K.mul(hp, v), fp).v == 0;
}

/// Coefficients of H(1, w) and F(1, w): reversal in the weighted degrees 3 and 6.
inline std::pair<Poly, Poly> infinity_chart(const CurveChar2& c) {
  Poly h(4), f(7);
  for (int i = 0; i < 4; ++i) h[i] = c.h[3 - i];
  for (int i = 0; i < 7; ++i) f[i] = c.f[6 - i];
  poly_trim(h);
  poly_trim(f);
  return {h, f};
}

}  // namespace detail

/// Smoothness of the weighted model Y^2 + H Y = F over the algebraic closure.
/// Singular points sit over roots of H; roots of a cubic over F_q lie in
/// F_{q^2} or F_{q^3}, so only those two fields are scanned.
inline bool smoothness_char2(const CurveFields& fields, const CurveChar2& c) {
  if (fields.q().p() != 2) throw OddCharacteristic("smoothness_char2 needs q even");
  const Poly h = detail::to_poly(c.h);
  if (h.empty()) return false;
  const Poly f = detail::to_poly(c.f);
  const std::uint32_t q = static_cast<std::uint32_t>(fields.q().q());

  for (unsigned k : {2u, 3u}) {
    const Field& K = fields.extension(k);
    for (std::uint32_t i = 0; i < K.order(); ++i) {
      if (k == 3 && i < q) continue;  // F_q roots were seen in F_{q^2}
      const Element u{i};
      if (poly_eval(K, h, u).v != 0) continue;
      if (detail::chart_singular_at(K, h, f, u)) return false;
    }
  }
  // Chart x = 1 adds the single point w = 0.
  if (c.h[3].v == 0) {
    const Field& F = fields.base();
    const Element v = F.sqrt_char2(c.f[6]);
    if (F.add(F.mul(c.h[2], v), c.f[5]).v == 0) return false;
  }
  return true;
}

/// Reference smoothness check scanning every point of F_{q^6} in both charts.
inline bool smoothness_char2_exhaustive(const CurveFields& fields, const CurveChar2& c) {
  const Poly h = detail::to_poly(c.h);
  if (h.empty()) return false;
  const Poly f = detail::to_poly(c.f);
  const Field& K = fields.extension(6);
  const auto [hw, fw] = detail::infinity_chart(c);
  for (std::uint32_t i = 0; i < K.order(); ++i) {
    const Element u{i};
    if (poly_eval(K, h, u).v == 0 && detail::chart_singular_at(K, h, f, u)) return false;
    if (poly_eval(K, hw, u).v == 0 && detail::chart_singular_at(K, hw, fw, u)) return false;
  }
  return true;
}

inline bool is_smooth(const CurveFields& fields, const Curve& curve) {
  if (const auto* odd = std::get_if<CurveOdd>(&curve)) {
    if (odd->f[6].v == 0 && odd->f[5].v == 0) return false;
    return poly_is_squarefree(fields.base(), detail::to_poly(odd->f));
  }
  return smoothness_char2(fields, std::get<CurveChar2>(curve));
}

/// #C(F_{q^k}) by direct summation over the affine line plus the points at infinity.
inline Int count_points(const CurveFields& fields, const Curve& curve, unsigned k) {
  const Field& K = fields.extension(k);
  Int total = 0;
  if (const auto* odd = std::get_if<CurveOdd>(&curve)) {
    const Poly f = detail::to_poly(odd->f);
    for (std::uint32_t i = 0; i < K.order(); ++i) {
      total += 1 + K.quadratic_character(poly_eval(K, f, Element{i}));
    }
    total += odd->f[6].v == 0 ? 1 : 1 + K.quadratic_character(odd->f[6]);
    return total;
  }
  const auto& c = std::get<CurveChar2>(curve);
  const Poly h = detail::to_poly(c.h);
  const Poly f = detail::to_poly(c.f);
  for (std::uint32_t i = 0; i < K.order(); ++i) {
    const Element x{i};
    total += detail::artin_schreier_solutions(K, poly_eval(K, h, x), poly_eval(K, f, x));
  }
  total += detail::artin_schreier_solutions(K, c.h[3], c.f[6]);
  return total;
}

/// (a, b) from #C(F_q) and #C(F_{q^2}).
inline CoeffPair weil_from_counts(const PrimePower& q, Int n1, Int n2) {
  const Int qq = q.q();
  const Int a = n1 - qq - 1;
  const Int twice_b = a * a - (qq * qq + 1 - n2);
  if (mod_floor(twice_b, 2) != 0) {
    throw ParityViolation("counts N1=" + std::to_string(n1) + " N2=" + std::to_string(n2) +
                          " give a non-integral b over q=" + std::to_string(qq));
  }
  const Int b = twice_b / 2;
  if (!is_admissible(WeilCoeffs{q, a, b})) {
    throw InadmissibleCount("counts N1=" + std::to_string(n1) + " N2=" + std::to_string(n2) +
                            " give inadmissible (a,b)=(" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  return {a, b};
}

// ---------------------------------------------------------------------------
// Enumeration in a fixed order. Odd q: id = sum f_j q^j. Even q:
// id = code(h) q^7 + code(f), code(h) >= 1.

inline std::uint64_t curve_id_space(const PrimePower& q) {
  const auto qq = static_cast<std::uint64_t>(q.q());
  std::uint64_t q7 = 1;
  for (int i = 0; i < 7; ++i) q7 *= qq;
  return q.p() == 2 ? q7 * qq * qq * qq * qq : q7;
}

/// Models examined before the smoothness filter.
inline std::uint64_t candidate_count(const PrimePower& q) {
  const auto qq = static_cast<std::uint64_t>(q.q());
  std::uint64_t q5 = 1;
  for (int i = 0; i < 5; ++i) q5 *= qq;
  if (q.p() == 2) return (qq * qq * qq * qq - 1) * q5 * qq * qq;
  return q5 * qq * qq - q5;
}

inline Curve curve_from_id(const PrimePower& q, std::uint64_t id) {
  const auto qq = static_cast<std::uint64_t>(q.q());
  if (q.p() != 2) {
    CurveOdd c{q, {}};
    for (auto& e : c.f) {
      e = {static_cast<std::uint32_t>(id % qq)};
      id /= qq;
    }
    return c;
  }
  CurveChar2 c{q, {}, {}};
  for (auto& e : c.f) {
    e = {static_cast<std::uint32_t>(id % qq)};
    id /= qq;
  }
  for (auto& e : c.h) {
    e = {static_cast<std::uint32_t>(id % qq)};
    id /= qq;
  }
  return c;
}

inline bool is_candidate(const Curve& curve) {
  if (const auto* odd = std::get_if<CurveOdd>(&curve)) return odd->f[6].v != 0 || odd->f[5].v != 0;
  const auto& c = std::get<CurveChar2>(curve);
  return std::any_of(c.h.begin(), c.h.end(), [](Element e) { return e.v != 0; });
}

/// Visits every smooth model in id order: fn(id, curve).
template <class Fn>
void enumerate_curves(const CurveFields& fields, Fn&& fn) {
  const std::uint64_t n = curve_id_space(fields.q());
  for (std::uint64_t id = 0; id < n; ++id) {
    const Curve c = curve_from_id(fields.q(), id);
    if (is_candidate(c) && is_smooth(fields, c)) fn(id, c);
  }
}

inline CensusRecord census_record(const CurveFields& fields, std::uint64_t id, const Curve& c) {
  CensusRecord r;
  r.id = id;
  r.n1 = count_points(fields, c, 1);
  r.n2 = count_points(fields, c, 2);
  std::tie(r.a, r.b) = weil_from_counts(fields.q(), r.n1, r.n2);
  return r;
}

/// `count` distinct smooth models spread evenly over the id space.
inline std::vector<std::pair<std::uint64_t, Curve>> sample_curves(const CurveFields& fields, std::size_t count) {
  const std::uint64_t n = curve_id_space(fields.q());
  std::vector<std::pair<std::uint64_t, Curve>> out;
  std::set<std::uint64_t> taken;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t id = static_cast<std::uint64_t>((static_cast<unsigned __int128>(n) * i) / count);
    for (std::uint64_t step = 0; step < n; ++step, id = (id + 1) % n) {
      if (taken.count(id)) continue;
      const Curve c = curve_from_id(fields.q(), id);
      if (is_candidate(c) && is_smooth(fields, c)) {
        taken.insert(id);
        out.emplace_back(id, c);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Census engine.

struct CensusOptions {
  unsigned jobs = 1;
  bool allow_extended = false;
  std::optional<std::filesystem::path> cache_dir;
  bool force = false;
};

struct CensusResult {
  PrimePower q;
  std::uint64_t models = 0;
  std::map<CoeffPair, std::uint64_t> counts;
  bool from_cache = false;

  std::set<CoeffPair> weil_set() const {
    std::set<CoeffPair> s;
    for (const auto& [ab, n] : counts) s.insert(ab);
    return s;
  }
  bool realizes(Int a, Int b) const { return counts.count({a, b}) != 0; }
};

namespace detail {

/// Histogram of (N1, N2) pairs; N1 <= 3q+3 and N2 <= 3q^2+3 hold by the Weil bound.
class CountHistogram {
 public:
  explicit CountHistogram(Int q) : w1_(3 * q + 4), w2_(3 * q * q + 4), bins_(w1_ * w2_, 0) {}

  void add(Int n1, Int n2) {
    if (n1 < 0 || n1 >= w1_ || n2 < 0 || n2 >= w2_) {
      throw InadmissibleCount("point counts N1=" + std::to_string(n1) + " N2=" + std::to_string(n2) +
                              " violate the Weil bound");
    }
    ++bins_[n1 * w2_ + n2];
    ++models_;
  }

  void merge(const CountHistogram& o) {
    for (std::size_t i = 0; i < bins_.size(); ++i) bins_[i] += o.bins_[i];
    models_ += o.models_;
  }

  CensusResult finish(const PrimePower& q) const {
    CensusResult r;
    r.q = q;
    r.models = models_;
    for (Int n1 = 0; n1 < w1_; ++n1) {
      for (Int n2 = 0; n2 < w2_; ++n2) {
        const auto n = bins_[n1 * w2_ + n2];
        if (n != 0) r.counts[weil_from_counts(q, n1, n2)] += n;
      }
    }
    return r;
  }

 private:
  Int w1_;
  Int w2_;
  std::vector<std::uint64_t> bins_;
  std::uint64_t models_ = 0;
};

/// Squarefree test for a polynomial of degree <= 6 over F, without allocation.
inline bool squarefree_fixed(const Field& F, const std::array<Element, 7>& coeffs) {
  std::array<Element, 7> a = coeffs;
  std::array<Element, 7> b{};
  int da = 6;
  while (da >= 0 && a[da].v == 0) --da;
  int db = -1;
  for (int i = 1; i <= da; ++i) {
    b[i - 1] = F.mul(F.from_int(i), a[i]);
    if (b[i - 1].v != 0) db = i - 1;
  }
  if (db < 0) return da <= 0;
  // Euclid on (a, b)
  while (db >= 0) {
    const Element li = F.inv(b[db]);
    while (da >= db) {
      const Element c = F.mul(a[da], li);
      const int shift = da - db;
      for (int i = 0; i <= db; ++i) a[i + shift] = F.sub(a[i + shift], F.mul(c, b[i]));
      while (da >= 0 && a[da].v == 0) --da;
    }
    std::swap(a, b);
    std::swap(da, db);
  }
  return da == 0;
}

// Partial sums sum_{i >= j} f_i x^i are kept per level so that each step
// of the coefficient odometer costs one table lookup and one addition per
// point; the constant term is folded in through precomputed character rows.
class OddEngine {
 public:
  explicit OddEngine(const CurveFields& fields)
      : F_(fields.base()), E_(fields.extension(2)), q_(F_.order()), n_(E_.order()) {
    for (unsigned j = 1; j <= 6; ++j) {
      auto& tab = mulc_[j];
      tab.resize(std::size_t{n_} * q_);
      for (std::uint32_t x = 0; x < n_; ++x) {
        const Element xj = E_.pow(Element{x}, j);
        for (std::uint32_t c = 0; c < q_; ++c) tab[std::size_t{x} * q_ + c] = E_.mul(Element{c}, xj).v;
      }
    }
    // chi(y + c0) for y in F_q (resp. F_{q^2}) and c0 in F_q
    chi1_.resize(std::size_t{q_} * q_);
    for (std::uint32_t y = 0; y < q_; ++y) {
      for (std::uint32_t c = 0; c < q_; ++c) {
        chi1_[std::size_t{y} * q_ + c] = static_cast<std::int8_t>(F_.quadratic_character(F_.add({y}, {c})));
      }
    }
    chi2_.resize(std::size_t{n_} * q_);
    for (std::uint32_t y = 0; y < n_; ++y) {
      for (std::uint32_t c = 0; c < q_; ++c) {
        chi2_[std::size_t{y} * q_ + c] = static_cast<std::int8_t>(E_.quadratic_character(E_.add({y}, {c})));
      }
    }
  }

  std::size_t task_count() const { return std::size_t{q_} * q_; }

  /// Task t fixes (f6, f5) = (t / q, t % q).
  void run_task(std::size_t t, CountHistogram& hist) const {
    const std::uint32_t c6 = static_cast<std::uint32_t>(t / q_);
    const std::uint32_t c5 = static_cast<std::uint32_t>(t % q_);
    if (c6 == 0 && c5 == 0) return;

    std::array<std::vector<std::uint32_t>, 7> partial;
    for (auto& l : partial) l.assign(n_, 0);
    for (std::uint32_t x = 0; x < n_; ++x) {
      partial[6][x] = mulc_[6][std::size_t{x} * q_ + c6];
      partial[5][x] = E_.add({partial[6][x]}, {mulc_[5][std::size_t{x} * q_ + c5]}).v;
    }
    std::array<Element, 7> f{};
    f[6] = {c6};
    f[5] = {c5};
    const Int q = q_;
    const Int inf1 = c6 == 0 ? 1 : 1 + F_.quadratic_character(f[6]);
    const Int inf2 = c6 == 0 ? 1 : 2;  // f6 in F_q is a square in F_{q^2}
    std::vector<Int> sum1(q_), sum2(q_);

    auto leaf = [&] {
      std::fill(sum1.begin(), sum1.end(), 0);
      std::fill(sum2.begin(), sum2.end(), 0);
      const auto& s = partial[1];
      for (std::uint32_t x = 0; x < n_; ++x) {
        const std::int8_t* row = &chi2_[std::size_t{s[x]} * q_];
        for (std::uint32_t c0 = 0; c0 < q_; ++c0) sum2[c0] += row[c0];
      }
      for (std::uint32_t x = 0; x < q_; ++x) {  // F_q sits at indices [0, q)
        const std::int8_t* row = &chi1_[std::size_t{s[x]} * q_];
        for (std::uint32_t c0 = 0; c0 < q_; ++c0) sum1[c0] += row[c0];
      }
      for (std::uint32_t c0 = 0; c0 < q_; ++c0) {
        f[0] = {c0};
        if (!squarefree_fixed(F_, f)) continue;
        hist.add(q + sum1[c0] + inf1, q * q + sum2[c0] + inf2);
      }
    };

    auto descend = [&](auto&& self, unsigned j) -> void {
      const auto& tab = mulc_[j];
      const auto& up = partial[j + 1];
      auto& cur = partial[j];
      for (std::uint32_t c = 0; c < q_; ++c) {
        f[j] = {c};
        for (std::uint32_t x = 0; x < n_; ++x) cur[x] = E_.add({up[x]}, {tab[std::size_t{x} * q_ + c]}).v;
        if (j == 1) {
          leaf();
        } else {
          self(self, j - 1);
        }
      }
    };
    descend(descend, 4);
  }

 private:
  const Field& F_;
  const Field& E_;
  std::uint32_t q_;
  std::uint32_t n_;
  std::array<std::vector<std::uint32_t>, 7> mulc_;
  std::vector<std::int8_t> chi1_;
  std::vector<std::int8_t> chi2_;
};

// Characteristic 2. One task per h; roots of h and the values h(x), 1/h(x)^2
// are computed once per task.
class Char2Engine {
 public:
  explicit Char2Engine(const CurveFields& fields)
      : fields_(fields), F_(fields.base()), E_(fields.extension(2)), T_(fields.extension(3)),
        q_(F_.order()), n_(E_.order()) {
    for (unsigned j = 1; j <= 6; ++j) {
      auto& tab = mulc_[j];
      tab.resize(std::size_t{n_} * q_);
      for (std::uint32_t x = 0; x < n_; ++x) {
        const Element xj = E_.pow(Element{x}, j);
        for (std::uint32_t c = 0; c < q_; ++c) tab[std::size_t{x} * q_ + c] = E_.mul(Element{c}, xj).v;
      }
    }
  }

  std::size_t task_count() const { return std::size_t{q_} * q_ * q_ * q_; }

  void run_task(std::size_t t, CountHistogram& hist) const {
    if (t == 0) return;  // h = 0
    CurveChar2 curve{fields_.q(), {}, {}};
    for (auto& e : curve.h) {
      e = {static_cast<std::uint32_t>(t % q_)};
      t /= q_;
    }
    const Poly h = to_poly(curve.h);

    struct Root {
      const Field* field;
      Element u;
      Element hp;  // h'(u)
    };
    std::vector<Root> roots;
    const Poly hd = poly_derivative(F_, h);
    for (const Field* K : {&E_, &T_}) {
      for (std::uint32_t i = (K == &T_ ? q_ : 0); i < K->order(); ++i) {
        if (poly_eval(*K, h, Element{i}).v == 0) roots.push_back({K, Element{i}, poly_eval(*K, hd, Element{i})});
      }
    }
    std::vector<std::uint32_t> hx(n_), winv(n_);
    for (std::uint32_t x = 0; x < n_; ++x) {
      const Element v = poly_eval(E_, h, Element{x});
      hx[x] = v.v;
      winv[x] = v.v == 0 ? 0 : E_.inv(E_.mul(v, v)).v;
    }
    const auto tr1 = F_.trace_table();
    const auto tr2 = E_.trace_table();

    std::array<std::vector<std::uint32_t>, 8> partial;
    for (auto& l : partial) l.assign(n_, 0);

    auto smooth = [&]() {
      for (const auto& r : roots) {
        const Field& K = *r.field;
        Element fu{0}, fpu{0};
        for (int i = 6; i >= 0; --i) fu = K.add(K.mul(fu, r.u), curve.f[i]);
        // f' = f1 + f3 x^2 + f5 x^4 in characteristic 2
        const Element u2 = K.mul(r.u, r.u);
        fpu = K.add(curve.f[1], K.mul(u2, K.add(curve.f[3], K.mul(u2, curve.f[5]))));
        if (K.add(K.mul(r.hp, K.sqrt_char2(fu)), fpu).v == 0) return false;
      }
      if (curve.h[3].v == 0) {
        const Element v = F_.sqrt_char2(curve.f[6]);
        if (F_.add(F_.mul(curve.h[2], v), curve.f[5]).v == 0) return false;
      }
      return true;
    };

    auto leaf = [&] {
      const auto& s = partial[1];
      for (std::uint32_t c0 = 0; c0 < q_; ++c0) {
        curve.f[0] = {c0};
        if (!smooth()) continue;
        Int n1 = 0, n2 = 0;
        for (std::uint32_t x = 0; x < n_; ++x) {
          if (hx[x] == 0) {
            n1 += x < q_ ? 1 : 0;
            n2 += 1;
            continue;
          }
          const std::uint32_t t = E_.mul(E_.add({s[x]}, {c0}), {winv[x]}).v;
          if (x < q_) n1 += tr1[t] == 0 ? 2 : 0;  // t lies in F_q here
          n2 += tr2[t] == 0 ? 2 : 0;
        }
        n1 += artin_schreier_solutions(F_, curve.h[3], curve.f[6]);
        n2 += artin_schreier_solutions(E_, curve.h[3], curve.f[6]);
        hist.add(n1, n2);
      }
    };

    auto descend = [&](auto&& self, unsigned j) -> void {
      const auto& tab = mulc_[j];
      const auto& up = partial[j + 1];
      auto& cur = partial[j];
      for (std::uint32_t c = 0; c < q_; ++c) {
        curve.f[j] = {c};
        for (std::uint32_t x = 0; x < n_; ++x) cur[x] = E_.add({up[x]}, {tab[std::size_t{x} * q_ + c]}).v;
        if (j == 1) {
          leaf();
        } else {
          self(self, j - 1);
        }
      }
    };
    descend(descend, 6);  // partial[7] is identically zero
  }

 private:
  const CurveFields& fields_;
  const Field& F_;
  const Field& E_;
  const Field& T_;
  std::uint32_t q_;
  std::uint32_t n_;
  std::array<std::vector<std::uint32_t>, 7> mulc_;
};

template <class Engine>
CountHistogram run_engine(const Engine& engine, Int q, unsigned jobs) {
  const std::size_t tasks = engine.task_count();
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks)));
  std::vector<CountHistogram> partials(jobs, CountHistogram(q));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  auto worker = [&](unsigned w) {
    try {
      for (std::size_t t = next++; t < tasks; t = next++) engine.run_task(t, partials[w]);
    } catch (...) {
      errors[w] = std::current_exception();
      next = tasks;
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  CountHistogram total(q);
  for (const auto& p : partials) total.merge(p);
  return total;
}

}  // namespace detail

/// Runs the census without touching any cache.
inline CensusResult run_census(const CurveFields& fields, unsigned jobs = 1) {
  const Int q = fields.q().q();
  if (fields.q().p() == 2) {
    const detail::Char2Engine engine(fields);
    return detail::run_engine(engine, q, jobs).finish(fields.q());
  }
  const detail::OddEngine engine(fields);
  return detail::run_engine(engine, q, jobs).finish(fields.q());
}

/// Census by the generic per-curve route; slow, used to cross-check the engines.
inline CensusResult run_census_reference(const CurveFields& fields) {
  CensusResult r;
  r.q = fields.q();
  enumerate_curves(fields, [&](std::uint64_t id, const Curve& c) {
    const auto rec = census_record(fields, id, c);
    ++r.counts[{rec.a, rec.b}];
    ++r.models;
  });
  return r;
}

// ---------------------------------------------------------------------------
// Cache files: a header line then one line per (a, b), sorted.

inline constexpr int kCacheVersion = 1;

inline std::filesystem::path cache_path(const std::filesystem::path& dir, Int q) {
  return dir / ("census_q" + std::to_string(q) + ".jsonl");
}

inline std::string serialize_census(const CensusResult& r) {
  std::string out;
  nlohmann::ordered_json header;
  header["q"] = r.q.q();
  header["p"] = r.q.p();
  header["m"] = r.q.m();
  header["models"] = r.models;
  header["version"] = kCacheVersion;
  out += header.dump() + "\n";
  for (const auto& [ab, n] : r.counts) {
    nlohmann::ordered_json line;
    line["a"] = ab.first;
    line["b"] = ab.second;
    line["count"] = n;
    out += line.dump() + "\n";
  }
  return out;
}

/// Parses a cache file; nullopt when it is malformed or describes another q.
inline std::optional<CensusResult> parse_census(std::istream& in, const PrimePower& q) {
  try {
    std::string line;
    if (!std::getline(in, line)) return std::nullopt;
    const auto header = nlohmann::json::parse(line);
    if (header.at("version").get<int>() != kCacheVersion || header.at("q").get<Int>() != q.q() ||
        header.at("p").get<Int>() != q.p() || header.at("m").get<unsigned>() != q.m()) {
      return std::nullopt;
    }
    CensusResult r;
    r.q = q;
    r.models = header.at("models").get<std::uint64_t>();
    r.from_cache = true;
    std::uint64_t total = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto rec = nlohmann::json::parse(line);
      const auto n = rec.at("count").get<std::uint64_t>();
      r.counts[{rec.at("a").get<Int>(), rec.at("b").get<Int>()}] += n;
      total += n;
    }
    if (total != r.models) return std::nullopt;
    return r;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

/// Realized (a, b) multiset over F_q, read from or written to the cache when one is configured.
inline CensusResult census_weil_set(Int q, const CensusOptions& opts = {}) {
  const PrimePower pq = check_census_q(q, opts.allow_extended);
  std::optional<std::filesystem::path> file;
  if (opts.cache_dir) {
    file = cache_path(*opts.cache_dir, q);
    if (!opts.force && std::filesystem::exists(*file)) {
      std::ifstream in(*file);
      if (auto cached = parse_census(in, pq)) return *cached;
    }
  }
  const CurveFields fields(pq);
  CensusResult r = run_census(fields, opts.jobs);
  if (file) {
    std::filesystem::create_directories(*opts.cache_dir);
    const auto tmp = file->string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << serialize_census(r);
      if (!out) throw Error("cannot write census cache " + tmp);
    }
    std::filesystem::rename(tmp, *file);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Verification against the classification.

struct ZetaCheck {
  std::uint64_t id = 0;
  CoeffPair ab;
  Int n3_counted = 0;
  Int n3_predicted = 0;
};

struct CensusReport {
  PrimePower q;
  std::uint64_t models = 0;
  std::set<CoeffPair> realized;
  std::set<CoeffPair> predicted;
  std::vector<CoeffPair> missing;     // predicted, not realized
  std::vector<CoeffPair> unexpected;  // realized, not predicted
  std::vector<ZetaCheck> zeta;
  std::vector<ZetaCheck> zeta_failures;

  bool sets_equal() const { return missing.empty() && unexpected.empty(); }
  bool ok() const { return sets_equal() && zeta_failures.empty() && !zeta.empty(); }
};

inline std::string describe_curve(const Curve& curve) {
  std::ostringstream os;
  auto coeffs = [&](const char* name, std::span<const Element> c) {
    os << name << "=[";
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i].v;
    os << "]";
  };
  if (const auto* odd = std::get_if<CurveOdd>(&curve)) {
    os << "y^2=f(x) over F_" << odd->q.q() << " ";
    coeffs("f", odd->f);
  } else {
    const auto& c = std::get<CurveChar2>(curve);
    os << "y^2+h(x)y=f(x) over F_" << c.q.q() << " ";
    coeffs("h", c.h);
    os << " ";
    coeffs("f", c.f);
  }
  return os.str();
}

/// Compares a finished census with the Jacobian classification and checks
/// #C(F_{q^3}) against the zeta prediction on `zeta_samples` models.
inline CensusReport check_census(const CurveFields& fields, const CensusResult& census,
                                 std::size_t zeta_samples = 50) {
  CensusReport rep;
  rep.q = fields.q();
  rep.models = census.models;
  rep.realized = census.weil_set();
  rep.predicted = jacobian_classes(fields.q());
  std::set_difference(rep.predicted.begin(), rep.predicted.end(), rep.realized.begin(), rep.realized.end(),
                      std::back_inserter(rep.missing));
  std::set_difference(rep.realized.begin(), rep.realized.end(), rep.predicted.begin(), rep.predicted.end(),
                      std::back_inserter(rep.unexpected));
  for (const auto& [id, curve] : sample_curves(fields, zeta_samples)) {
    const auto rec = census_record(fields, id, curve);
    ZetaCheck z;
    z.id = id;
    z.ab = {rec.a, rec.b};
    z.n3_counted = count_points(fields, curve, 3);
    z.n3_predicted = predicted_curve_count(WeilCoeffs{fields.q(), rec.a, rec.b}, 3);
    rep.zeta.push_back(z);
    if (z.n3_counted != z.n3_predicted) rep.zeta_failures.push_back(z);
  }
  return rep;
}

/// Runs the census and the checks; throws VerificationFailure on any discrepancy.
inline CensusReport verify_census(Int q, const CensusOptions& opts = {}) {
  const PrimePower pq = check_census_q(q, opts.allow_extended);
  const CurveFields fields(pq);
  const CensusResult census = census_weil_set(q, opts);
  CensusReport rep = check_census(fields, census);
  if (rep.ok()) return rep;

  std::ostringstream os;
  os << "census q=" << q << ":";
  for (const auto& [a, b] : rep.missing) os << " missing (" << a << "," << b << ")";
  for (const auto& [a, b] : rep.unexpected) os << " unexpected (" << a << "," << b << ")";
  for (const auto& z : rep.zeta_failures) {
    os << " zeta mismatch on " << describe_curve(curve_from_id(pq, z.id)) << " N3=" << z.n3_counted
       << " predicted " << z.n3_predicted;
  }
  if (rep.zeta.empty()) os << " no curves sampled";
  throw VerificationFailure(os.str());
}

}  // namespace weilsurf

#endif  // WEILSURF_CENSUS_HPP
