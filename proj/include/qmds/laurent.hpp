/**
 * @file laurent.hpp
 * @brief Sparse Laurent polynomials in q^{1/2} with exact rational coefficients.
 *
 * Exponents are stored doubled: the map key e represents the monomial q^{e/2}.
 * This lets half-integral powers of q (i.e. integral powers of sqrt(q)) live in
 * the same ring as ordinary polynomials in q without any floating point.
 */
#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "qmds/rational.hpp"

namespace qmds {

class LaurentQ {
 public:
  // key: doubled exponent (key e  <->  monomial q^{e/2}); values are nonzero.
  using Map = std::map<int, Rat>;

  LaurentQ() = default;
  LaurentQ(long c) { add_term(0, Rat(c)); }  // NOLINT(google-explicit-constructor)
  LaurentQ(const Rat& c) { add_term(0, c); } // NOLINT(google-explicit-constructor)

  /// q^a for integer a.
  static LaurentQ q_pow(int a) { return q_half_pow(2 * a); }
  /// q^{e2/2}; e2 is the doubled exponent.
  static LaurentQ q_half_pow(int e2) {
    LaurentQ r;
    r.add_term(e2, 1);
    return r;
  }
  /// c * q^{e2/2}.
  static LaurentQ monomial(const Rat& c, int e2) {
    LaurentQ r;
    r.add_term(e2, c);
    return r;
  }

  bool is_zero() const { return t_.empty(); }
  const Map& terms() const { return t_; }

  /// True when every exponent is an integer power of q.
  bool has_integer_exponents() const {
    for (auto& [e, c] : t_)
      if (e % 2 != 0) return false;
    return true;
  }

  int min_e2() const { return t_.empty() ? 0 : t_.begin()->first; }
  int max_e2() const { return t_.empty() ? 0 : t_.rbegin()->first; }

  Rat coeff_e2(int e2) const {
    auto it = t_.find(e2);
    return it == t_.end() ? Rat(0) : it->second;
  }
  /// Coefficient of q^a (integer a).
  Rat coeff(int a) const { return coeff_e2(2 * a); }

  void add_term(int e2, const Rat& c) {
    if (c == 0) return;
    auto it = t_.find(e2);
    if (it == t_.end()) {
      t_.emplace(e2, c);
    } else {
      it->second += c;
      if (it->second == 0) t_.erase(it);
    }
  }

  LaurentQ& operator+=(const LaurentQ& o) {
    for (auto& [e, c] : o.t_) add_term(e, c);
    return *this;
  }
  LaurentQ& operator-=(const LaurentQ& o) {
    for (auto& [e, c] : o.t_) add_term(e, -c);
    return *this;
  }
  friend LaurentQ operator+(LaurentQ a, const LaurentQ& b) { return a += b; }
  friend LaurentQ operator-(LaurentQ a, const LaurentQ& b) { return a -= b; }
  friend LaurentQ operator-(const LaurentQ& a) {
    LaurentQ r;
    for (auto& [e, c] : a.t_) r.t_.emplace(e, -c);
    return r;
  }
  friend LaurentQ operator*(const LaurentQ& a, const LaurentQ& b) {
    LaurentQ r;
    for (auto& [ea, ca] : a.t_)
      for (auto& [eb, cb] : b.t_) r.add_term(ea + eb, ca * cb);
    return r;
  }
  LaurentQ& operator*=(const LaurentQ& o) { return *this = *this * o; }
  friend bool operator==(const LaurentQ& a, const LaurentQ& b) { return a.t_ == b.t_; }
  friend bool operator!=(const LaurentQ& a, const LaurentQ& b) { return !(a == b); }

  /// Substitute q^{1/2} -> q^{num/(2*den)}; i.e. map doubled exponent e to e*num/den.
  /// num may be negative (q -> 1/q is num=-1, den=1).  Throws if any exponent
  /// fails to stay half-integral.
  LaurentQ subst_exponent(int num, int den = 1) const {
    if (den == 0) throw std::invalid_argument("subst_exponent: zero denominator");
    LaurentQ r;
    for (auto& [e, c] : t_) {
      long p = static_cast<long>(e) * num;
      if (p % den != 0) throw std::domain_error("subst_exponent: non half-integral exponent");
      r.add_term(static_cast<int>(p / den), c);
    }
    return r;
  }

  /// q -> 1/q.
  LaurentQ invert_q() const { return subst_exponent(-1); }

  /// Evaluate at q = q0 (requires integer exponents).
  Rat eval(const Rat& q0) const {
    Rat acc = 0;
    for (auto& [e, c] : t_) {
      if (e % 2 != 0) throw std::domain_error("eval: half-integral exponent; use eval_sqrt");
      acc += c * rat_pow(q0, e / 2);
    }
    return acc;
  }

  /// Evaluate at q^{1/2} = s0 (so q = s0^2).
  Rat eval_sqrt(const Rat& s0) const {
    Rat acc = 0;
    for (auto& [e, c] : t_) acc += c * rat_pow(s0, e);
    return acc;
  }

  /// Exact division; throws if the quotient is not a Laurent polynomial.
  LaurentQ divexact(const LaurentQ& d) const {
    if (d.is_zero()) throw std::domain_error("divexact: division by zero");
    LaurentQ rem = *this, quot;
    const int dlead = d.max_e2();
    const Rat dc = d.t_.rbegin()->second;
    while (!rem.is_zero()) {
      const int rlead = rem.max_e2();
      const Rat rc = rem.t_.rbegin()->second;
      if (rlead - dlead < rem.min_e2() - d.min_e2())
        throw std::domain_error("divexact: not divisible");
      LaurentQ m = monomial(rc / dc, rlead - dlead);
      quot += m;
      rem -= m * d;
      if (!rem.is_zero() && rem.max_e2() >= rlead)
        throw std::logic_error("divexact: no progress");
    }
    return quot;
  }

  std::string to_string() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest power first.
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
      const auto& [e, c] = *it;
      Rat a = c;
      if (!first) {
        os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
      }
      first = false;
      if (e == 0) {
        os << a.get_str();
      } else {
        if (a != 1) os << a.get_str() << "*";
        os << "q";
        if (e != 2) {
          os << "^";
          if (e % 2 == 0)
            os << e / 2;
          else
            os << "(" << e << "/2)";
        }
      }
    }
    return os.str();
  }

 private:
  static Rat rat_pow(const Rat& b, long e) {
    if (e == 0) return 1;
    Rat base = e > 0 ? b : Rat(1) / b;
    long n = e > 0 ? e : -e;
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

/// Inverse of a monomial c*q^{e/2}; throws for anything longer.
inline LaurentQ ring_inverse(const LaurentQ& c) {
  if (c.terms().size() != 1)
    throw std::domain_error("LaurentQ inverse: only monomials are invertible");
  auto& [e, co] = *c.terms().begin();
  return LaurentQ::monomial(Rat(1) / co, -e);
}

}  // namespace qmds
