/**
 * @file weil.hpp
 * @brief The symbolic coefficient ring spanned by powers of q and Hecke trace
 *        symbols T_{2k} with q-power multipliers.
 *
 * An element is a finite sum  sum_a c_a q^a  +  sum_{k,a} d_{k,a} q^a T_{2k},
 * with exact rational coefficients and half-integral powers of q allowed
 * (doubled-exponent convention shared with LaurentQ).  T_{2k} stands for the
 * trace of the Hecke operator at q on the weight-2k cusp forms for SL(2,Z).
 *
 * The ring structure is deliberately partial: a product in which both factors
 * carry Hecke symbols is not expressible in the span and raises
 * UnsupportedProductError instead of silently producing garbage.
 *
 * Each basis element has a weight (thinking of q^a as weight 2a and
 * q^a T_{2k} as weight 2a + 2k - 1); the involution sigma sends q -> 1/q,
 * T_{2k}(q) -> q^{1-2k} T_{2k}(q), pairing weight w with weight -w.
 */
#pragma once

#include <functional>
#include <map>
#include <sstream>
#include <utility>

#include "qmds/laurent.hpp"

namespace qmds {

struct UnsupportedProductError : std::domain_error {
  UnsupportedProductError()
      : std::domain_error("product of two Hecke-symbol terms is outside the ring") {}
};

struct BoundaryWeightError : std::domain_error {
  explicit BoundaryWeightError(const std::string& m) : std::domain_error(m) {}
};

class WeilElement {
 public:
  // key: (doubled q-exponent e2, symbol s); s == 0 is the unit symbol,
  // s == k >= 2 stands for T_{2k}.  Values are nonzero rationals.
  using Key = std::pair<int, int>;
  using Map = std::map<Key, Rat>;

  WeilElement() = default;
  WeilElement(long c) { add_term(0, 0, Rat(c)); }        // NOLINT
  WeilElement(const Rat& c) { add_term(0, 0, c); }       // NOLINT
  WeilElement(const LaurentQ& p) {                       // NOLINT
    for (auto& [e, c] : p.terms()) add_term(e, 0, c);
  }

  /// c * q^{e2/2} * T_{2k} (sym = k; sym = 0 for no symbol).
  static WeilElement monomial(const Rat& c, int e2, int sym) {
    WeilElement w;
    w.add_term(e2, sym, c);
    return w;
  }
  /// T_{2k}.
  static WeilElement hecke(int k) { return monomial(1, 0, k); }

  const Map& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  void add_term(int e2, int sym, const Rat& c) {
    if (c == 0) return;
    if (sym == 1 || sym < 0) throw std::invalid_argument("bad Hecke symbol index");
    Key k{e2, sym};
    auto it = t_.find(k);
    if (it == t_.end()) {
      t_.emplace(k, c);
    } else {
      it->second += c;
      if (it->second == 0) t_.erase(it);
    }
  }

  WeilElement& operator+=(const WeilElement& o) {
    for (auto& [k, c] : o.t_) add_term(k.first, k.second, c);
    return *this;
  }
  WeilElement& operator-=(const WeilElement& o) {
    for (auto& [k, c] : o.t_) add_term(k.first, k.second, -c);
    return *this;
  }
  friend WeilElement operator+(WeilElement a, const WeilElement& b) { return a += b; }
  friend WeilElement operator-(WeilElement a, const WeilElement& b) { return a -= b; }
  friend WeilElement operator-(const WeilElement& a) {
    WeilElement r;
    for (auto& [k, c] : a.t_) r.t_.emplace(k, -c);
    return r;
  }
  friend WeilElement operator*(const WeilElement& a, const WeilElement& b) {
    WeilElement r;
    for (auto& [ka, ca] : a.t_)
      for (auto& [kb, cb] : b.t_) {
        if (ka.second != 0 && kb.second != 0) throw UnsupportedProductError();
        r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
      }
    return r;
  }
  WeilElement& operator*=(const WeilElement& o) { return *this = *this * o; }
  friend bool operator==(const WeilElement& a, const WeilElement& b) { return a.t_ == b.t_; }
  friend bool operator!=(const WeilElement& a, const WeilElement& b) { return !(a == b); }

  /// Weight of a basis element: q^{e2/2} has weight e2; q^{e2/2} T_{2k} has
  /// weight e2 + 2k - 1.
  static int term_weight(const Key& k) {
    return k.first + (k.second ? 2 * k.second - 1 : 0);
  }

  /// The involution q -> 1/q extended by T_{2k}(1/q) = q^{-(2k-1)} T_{2k}(q).
  WeilElement sigma() const {
    WeilElement r;
    for (auto& [k, c] : t_) {
      if (k.second == 0)
        r.add_term(-k.first, 0, c);
      else
        r.add_term(-k.first + 2 * (1 - 2 * k.second), k.second, c);
    }
    return r;
  }

  /// Part of strictly positive weight after recentring: keep terms with
  /// term_weight > w_threshold.  If `forbid_boundary` is set, a term of weight
  /// exactly w_threshold raises BoundaryWeightError.
  WeilElement dominant_part(int w_threshold, bool forbid_boundary = false) const {
    WeilElement r;
    for (auto& [k, c] : t_) {
      int w = term_weight(k);
      if (forbid_boundary && w == w_threshold)
        throw BoundaryWeightError("term of exactly the boundary weight " +
                                  std::to_string(w_threshold));
      if (w > w_threshold) r.add_term(k.first, k.second, c);
    }
    return r;
  }

  /// Pure q-power part as a Laurent polynomial; throws if Hecke symbols remain.
  LaurentQ as_laurent() const {
    LaurentQ p;
    for (auto& [k, c] : t_) {
      if (k.second != 0) throw std::domain_error("WeilElement::as_laurent: Hecke symbol present");
      p.add_term(k.first, c);
    }
    return p;
  }
  bool is_laurent() const {
    for (auto& [k, c] : t_)
      if (k.second != 0) return false;
    return true;
  }

  /// Coefficient (a Laurent polynomial in q) of the symbol T_{2k} (sym = k),
  /// or of the unit symbol (sym = 0).
  LaurentQ symbol_coeff(int sym) const {
    LaurentQ p;
    for (auto& [k, c] : t_)
      if (k.second == sym) p.add_term(k.first, c);
    return p;
  }

  /// Largest Hecke symbol index present (0 when purely Laurent).
  int max_symbol() const {
    int m = 0;
    for (auto& [k, c] : t_) m = std::max(m, k.second);
    return m;
  }

  /// Substitute zero for the Hecke symbols whose cusp form space is trivial
  /// (weights 4..10, i.e. T_4, T_6, T_8, T_10 vanish identically).
  WeilElement drop_trivial_symbols() const {
    WeilElement r;
    for (auto& [k, c] : t_)
      if (!(k.second >= 2 && k.second <= 5)) r.add_term(k.first, k.second, c);
    return r;
  }

  /// Evaluate numerically at q = q0, resolving T_{2k} via the given table.
  Rat eval(const Rat& q0, const std::function<Rat(int)>& hecke_value) const {
    Rat acc = 0;
    for (auto& [k, c] : t_) {
      if (k.first % 2 != 0) throw std::domain_error("WeilElement::eval: half-integral power");
      Rat v = c * pow_rat(q0, k.first / 2);
      if (k.second != 0) v *= hecke_value(k.second);
      acc += v;
    }
    return acc;
  }

  std::string to_string() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
      const auto& [k, c] = *it;
      Rat a = c;
      if (!first) {
        os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
      }
      first = false;
      bool unit_sym = (k.second == 0);
      if (k.first == 0 && unit_sym) {
        os << a.get_str();
      } else {
        bool wrote = false;
        if (a != 1 || (k.first == 0 && !unit_sym)) {
          os << a.get_str();
          wrote = true;
        }
        if (k.first != 0) {
          if (wrote) os << "*";
          os << "q";
          if (k.first != 2) {
            os << "^";
            if (k.first % 2 == 0)
              os << k.first / 2;
            else
              os << "(" << k.first << "/2)";
          }
          wrote = true;
        }
        if (!unit_sym) {
          if (wrote) os << "*";
          os << "T" << 2 * k.second;
        }
      }
    }
    return os.str();
  }

 private:
  static Rat pow_rat(const Rat& b, long e) {
    Rat base = e >= 0 ? b : Rat(1) / b;
    long n = e >= 0 ? e : -e;
    Rat acc = 1;
    while (n) {
      if (n & 1) acc *= base;
      base *= base;
      n >>= 1;
    }
    return acc;
  }

  Map t_;
};

/// Inverse of a symbol-free monomial c*q^{e/2}; throws for anything longer.
inline WeilElement ring_inverse(const WeilElement& c) {
  if (c.terms().size() != 1 || c.terms().begin()->first.second != 0)
    throw std::domain_error("WeilElement inverse: only q-power monomials are invertible");
  auto& [k, co] = *c.terms().begin();
  return WeilElement::monomial(Rat(1) / co, -k.first, 0);
}

}  // namespace qmds
