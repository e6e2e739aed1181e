#ifndef WEILSURF_SMALLFIELD_HPP
#define WEILSURF_SMALLFIELD_HPP

// Small finite fields built as towers F_p ⊂ F_q ⊂ F_{q^k}.
//
// An element is an index in [0, |F|). An element of F[x]/(g) with
// coordinates (c_0, ..., c_{k-1}) over the base has index sum c_i |base|^i,
// so base elements keep their index in every extension and index 1 is the
// identity. Multiplication and addition go through exp/log/Zech tables built
// once at construction; the slow coordinate arithmetic is only used to build
// those tables.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "weilsurf/arith.hpp"

namespace weilsurf {

struct Element {
  std::uint32_t v = 0;
  friend constexpr auto operator<=>(const Element&, const Element&) = default;
};

/// Coefficients low degree first.
using Poly = std::vector<Element>;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

inline constexpr unsigned kMaxTotalDegree = 12;
inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 22;

class Field {
 public:
  static FieldPtr prime(Int p);
  static FieldPtr base_field(Int p, unsigned m);
  static FieldPtr extend(const FieldPtr& base, unsigned k);

  Int characteristic() const { return p_; }
  std::uint32_t order() const { return order_; }
  unsigned total_degree() const { return total_degree_; }
  unsigned degree() const { return degree_; }
  const FieldPtr& base() const { return base_; }
  /// Monic modulus over the base (empty for a prime field).
  const Poly& modulus() const { return modulus_; }

  /// True when `sub` is this field or one of its tower ancestors.
  bool contains(const Field& sub) const {
    for (const Field* f = this; f != nullptr; f = f->base_.get()) {
      if (f == &sub) return true;
    }
    return false;
  }

  Element zero() const { return {0}; }
  Element one() const { return {1}; }
  Element element(std::uint32_t i) const {
    if (i >= order_) throw std::out_of_range("element index out of range");
    return {i};
  }
  /// The class of x in base[x]/(modulus), or the generator of F_p.
  Element generator() const { return {exp_[1]}; }

  bool is_zero(Element x) const { return x.v == 0; }

  Element add(Element x, Element y) const {
    if (x.v == 0) return y;
    if (y.v == 0) return x;
    const std::uint32_t lx = log_[x.v];
    std::uint32_t d = log_[y.v] + n1_ - lx;
    if (d >= n1_) d -= n1_;
    const std::int32_t z = zech_[d];
    if (z < 0) return {0};
    std::uint32_t e = lx + static_cast<std::uint32_t>(z);
    if (e >= n1_) e -= n1_;
    return {exp_[e]};
  }

  Element neg(Element x) const {
    if (x.v == 0 || p_ == 2) return x;
    std::uint32_t e = log_[x.v] + n1_ / 2;
    if (e >= n1_) e -= n1_;
    return {exp_[e]};
  }

  Element sub(Element x, Element y) const { return add(x, neg(y)); }

  Element mul(Element x, Element y) const {
    if (x.v == 0 || y.v == 0) return {0};
    std::uint32_t e = log_[x.v] + log_[y.v];
    if (e >= n1_) e -= n1_;
    return {exp_[e]};
  }

  Element inv(Element x) const {
    if (x.v == 0) throw DivisionByZero("inverse of zero");
    const std::uint32_t l = log_[x.v];
    return {exp_[l == 0 ? 0 : n1_ - l]};
  }

  Element div(Element x, Element y) const { return mul(x, inv(y)); }

  Element pow(Element x, std::uint64_t e) const {
    Element r = one();
    while (e > 0) {
      if (e & 1) r = mul(r, x);
      x = mul(x, x);
      e >>= 1;
    }
    return r;
  }

  /// n * 1 for an integer n.
  Element from_int(Int n) const { return {static_cast<std::uint32_t>(mod_floor(n, p_))}; }

  /// Square root in characteristic 2 (squaring is a bijection there).
  Element sqrt_char2(Element x) const {
    if (p_ != 2) throw OddCharacteristic("sqrt_char2 in odd characteristic");
    if (x.v == 0) return x;
    const std::uint32_t l = log_[x.v];
    return {exp_[(l % 2 == 0) ? l / 2 : (l + n1_) / 2]};
  }

  /// -1, 0 or +1 according to whether c is a non-square, zero or a nonzero square.
  int quadratic_character(Element c) const {
    if (p_ == 2) throw EvenCharacteristic("quadratic character in characteristic 2");
    return chi_[c.v];
  }

  /// Absolute trace to F_2.
  int absolute_trace(Element c) const {
    if (p_ != 2) throw OddCharacteristic("absolute trace in odd characteristic");
    return trace_[c.v];
  }

  std::span<const std::int8_t> character_table() const { return chi_; }
  std::span<const std::uint8_t> trace_table() const { return trace_; }
  std::span<const std::uint32_t> log_table() const { return log_; }
  std::span<const std::uint32_t> exp_table() const { return exp_; }

  /// Coordinates over the base field.
  std::vector<Element> coordinates(Element x) const {
    std::vector<Element> c(degree_);
    std::uint32_t v = x.v;
    for (unsigned i = 0; i < degree_; ++i) {
      c[i] = {v % base_order_};
      v /= base_order_;
    }
    return c;
  }

  std::string describe() const {
    return "F_" + std::to_string(order_) + " (degree " + std::to_string(degree_) + " over F_" +
           std::to_string(base_order_) + ")";
  }

 private:
  Field() = default;

  Element from_coordinates(const std::vector<Element>& c) const {
    std::uint32_t v = 0;
    for (unsigned i = degree_; i-- > 0;) v = v * base_order_ + c[i].v;
    return {v};
  }

  // Coordinate arithmetic, only used while building tables.
  Element slow_add(Element x, Element y) const;
  Element slow_mul(Element x, Element y) const;
  void build_tables();

  Int p_ = 2;
  unsigned degree_ = 1;
  unsigned total_degree_ = 1;
  std::uint32_t order_ = 2;
  std::uint32_t base_order_ = 2;
  std::uint32_t n1_ = 1;  // order - 1
  FieldPtr base_;
  Poly modulus_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::int32_t> zech_;
  std::vector<std::int8_t> chi_;
  std::vector<std::uint8_t> trace_;
};

// ---------------------------------------------------------------------------
// Polynomials over a Field.

inline void poly_trim(Poly& f) {
  while (!f.empty() && f.back().v == 0) f.pop_back();
}

/// Degree of f, -1 for the zero polynomial.
inline int poly_degree(const Poly& f) {
  for (std::size_t i = f.size(); i-- > 0;) {
    if (f[i].v != 0) return static_cast<int>(i);
  }
  return -1;
}

/// Horner evaluation at a point of any field that contains the coefficients.
inline Element poly_eval(const Field& F, const Poly& f, Element x) {
  Element acc = F.zero();
  for (std::size_t i = f.size(); i-- > 0;) acc = F.add(F.mul(acc, x), f[i]);
  return acc;
}

inline Poly poly_derivative(const Field& F, const Poly& f) {
  Poly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(F.mul(F.from_int(static_cast<Int>(i)), f[i]));
  poly_trim(d);
  return d;
}

inline Poly poly_sub(const Field& F, Poly f, const Poly& g) {
  if (f.size() < g.size()) f.resize(g.size(), F.zero());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = F.sub(f[i], g[i]);
  poly_trim(f);
  return f;
}

inline Poly poly_mod(const Field& F, Poly f, const Poly& g) {
  const int dg = poly_degree(g);
  if (dg < 0) throw DivisionByZero("polynomial reduction by zero");
  const Element lead_inv = F.inv(g[dg]);
  poly_trim(f);
  for (int df = poly_degree(f); df >= dg; df = poly_degree(f)) {
    const Element c = F.mul(f[df], lead_inv);
    for (int i = 0; i <= dg; ++i) f[df - dg + i] = F.sub(f[df - dg + i], F.mul(c, g[i]));
    poly_trim(f);
  }
  return f;
}

inline Poly poly_mul(const Field& F, const Poly& f, const Poly& g) {
  if (f.empty() || g.empty()) return {};
  Poly r(f.size() + g.size() - 1, F.zero());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].v == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(f[i], g[j]));
  }
  poly_trim(r);
  return r;
}

inline Poly poly_gcd(const Field& F, Poly f, Poly g) {
  poly_trim(f);
  poly_trim(g);
  while (!g.empty()) {
    Poly r = poly_mod(F, f, g);
    f = std::move(g);
    g = std::move(r);
  }
  if (!f.empty()) {
    const Element li = F.inv(f.back());
    for (auto& c : f) c = F.mul(c, li);
  }
  return f;
}

/// base^e mod g.
inline Poly poly_powmod(const Field& F, Poly base, std::uint64_t e, const Poly& g) {
  Poly r{F.one()};
  base = poly_mod(F, std::move(base), g);
  while (e > 0) {
    if (e & 1) r = poly_mod(F, poly_mul(F, r, base), g);
    base = poly_mod(F, poly_mul(F, base, base), g);
    e >>= 1;
  }
  return r;
}

/// Ben-Or style test: no factor of degree <= deg/2, via gcd(x^{Q^i} - x, f).
inline bool poly_is_irreducible(const Field& F, const Poly& f) {
  const int d = poly_degree(f);
  if (d < 1) return false;
  if (d == 1) return true;
  const Poly x{F.zero(), F.one()};
  Poly xp = x;
  for (int i = 1; i <= d / 2; ++i) {
    xp = poly_powmod(F, xp, F.order(), f);
    const Poly g = poly_gcd(F, f, poly_sub(F, xp, x));
    if (poly_degree(g) > 0) return false;
  }
  return true;
}

inline bool poly_is_squarefree(const Field& F, const Poly& f) {
  const Poly d = poly_derivative(F, f);
  if (d.empty()) return poly_degree(f) <= 0;
  return poly_degree(poly_gcd(F, f, d)) == 0;
}

// ---------------------------------------------------------------------------
// Field construction.

inline FieldPtr Field::prime(Int p) {
  if (!is_prime(p)) throw NotAPrimePower("field characteristic " + std::to_string(p) + " is not prime");
  if (static_cast<std::uint64_t>(p) > kMaxFieldOrder) throw SizeGuard("prime too large");
  auto f = std::shared_ptr<Field>(new Field());
  f->p_ = p;
  f->degree_ = 1;
  f->total_degree_ = 1;
  f->order_ = static_cast<std::uint32_t>(p);
  f->base_order_ = f->order_;
  f->build_tables();
  return f;
}

inline FieldPtr Field::extend(const FieldPtr& base, unsigned k) {
  if (!base) throw std::invalid_argument("null base field");
  if (k == 0) throw std::invalid_argument("extension degree must be >= 1");
  if (k == 1) return base;
  const unsigned total = base->total_degree_ * k;
  std::uint64_t order = 1;
  for (unsigned i = 0; i < k; ++i) order *= base->order_;
  if (total > kMaxTotalDegree || order > kMaxFieldOrder) {
    throw SizeGuard("field of order " + std::to_string(base->order_) + "^" + std::to_string(k) +
                    " exceeds the size bound");
  }

  auto f = std::shared_ptr<Field>(new Field());
  f->p_ = base->p_;
  f->degree_ = k;
  f->total_degree_ = total;
  f->order_ = static_cast<std::uint32_t>(order);
  f->base_order_ = base->order_;
  f->base_ = base;

  // First monic irreducible in lexicographic order of (c_0, ..., c_{k-1}),
  // with c_0 varying fastest.
  const Field& B = *base;
  std::vector<std::uint32_t> digits(k, 0);
  for (;;) {
    Poly g(k + 1);
    for (unsigned i = 0; i < k; ++i) g[i] = {digits[i]};
    g[k] = B.one();
    if (g[0].v != 0 && poly_is_irreducible(B, g)) {
      f->modulus_ = std::move(g);
      break;
    }
    unsigned i = 0;
    while (i < k && ++digits[i] == B.order_) digits[i++] = 0;
    if (i == k) throw std::logic_error("no irreducible polynomial found");
  }
  f->build_tables();
  return f;
}

inline FieldPtr Field::base_field(Int p, unsigned m) {
  if (m == 0) throw NotAPrimePower("exponent must be >= 1");
  return extend(prime(p), m);
}

inline Element Field::slow_add(Element x, Element y) const {
  if (!base_) return {static_cast<std::uint32_t>((x.v + y.v) % order_)};
  auto cx = coordinates(x);
  const auto cy = coordinates(y);
  for (unsigned i = 0; i < degree_; ++i) cx[i] = base_->add(cx[i], cy[i]);
  return from_coordinates(cx);
}

inline Element Field::slow_mul(Element x, Element y) const {
  if (!base_) return {static_cast<std::uint32_t>((std::uint64_t{x.v} * y.v) % order_)};
  const Field& B = *base_;
  auto prod = poly_mul(B, coordinates(x), coordinates(y));
  prod = poly_mod(B, std::move(prod), modulus_);
  prod.resize(degree_, B.zero());
  return from_coordinates(prod);
}

inline void Field::build_tables() {
  n1_ = order_ - 1;
  exp_.assign(order_, 0);
  log_.assign(order_, 0);

  std::vector<std::uint64_t> factors;
  {
    std::uint64_t n = n1_;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        factors.push_back(d);
        while (n % d == 0) n /= d;
      }
    }
    if (n > 1) factors.push_back(n);
  }
  auto slow_pow = [this](Element x, std::uint64_t e) {
    Element r{1};
    while (e > 0) {
      if (e & 1) r = slow_mul(r, x);
      x = slow_mul(x, x);
      e >>= 1;
    }
    return r;
  };

  // Primitive element: prefer the class of x itself, then scan upward.
  std::uint32_t start = base_ ? base_order_ : 2;
  Element g{1};
  if (order_ == 2) {
    g = {1};
  } else {
    for (std::uint32_t cand = start;; ++cand) {
      if (cand == order_) cand = 2;
      const Element c{cand};
      bool primitive = true;
      for (auto r : factors) {
        if (slow_pow(c, n1_ / r).v == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        g = c;
        break;
      }
    }
  }

  Element x{1};
  for (std::uint32_t e = 0; e < n1_; ++e) {
    exp_[e] = x.v;
    log_[x.v] = e;
    x = slow_mul(x, g);
  }
  exp_[n1_] = 1;

  zech_.assign(n1_, -1);
  for (std::uint32_t e = 0; e < n1_; ++e) {
    const Element s = slow_add({1}, {exp_[e]});
    zech_[e] = s.v == 0 ? -1 : static_cast<std::int32_t>(log_[s.v]);
  }

  if (p_ == 2) {
    trace_.assign(order_, 0);
    for (std::uint32_t v = 0; v < order_; ++v) {
      Element acc{0};
      Element c{v};
      for (unsigned i = 0; i < total_degree_; ++i) {
        acc = add(acc, c);
        c = mul(c, c);
      }
      if (acc.v > 1) throw std::logic_error("trace left the prime field");
      trace_[v] = static_cast<std::uint8_t>(acc.v);
    }
  } else {
    chi_.assign(order_, 0);
    for (std::uint32_t v = 1; v < order_; ++v) chi_[v] = (log_[v] % 2 == 0) ? 1 : -1;
  }
}

}  // namespace weilsurf

#endif  // WEILSURF_SMALLFIELD_HPP
