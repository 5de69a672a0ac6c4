/**
 * @file qrat.hpp
 * @brief Exact rational functions in q^{1/2} (numerator / denominator form).
 *
 * Elements are stored as a pair of Laurent polynomials in q^{1/2}, kept in a
 * canonical form: the denominator is a monic ordinary polynomial in q^{1/2}
 * with nonzero constant term, and numerator/denominator are coprime.
 * This field is the coefficient ring used wherever a computation must stay
 * symbolic in q (binomials C(q, n), Catalan-type expressions, character
 * specializations at q^{+-1/2}, ...).
 */
#pragma once

#include <vector>

#include "qmds/laurent.hpp"

namespace qmds {

class QRat {
 public:
  QRat() : num_(), den_(1) {}
  QRat(long c) : num_(c), den_(1) {}             // NOLINT(google-explicit-constructor)
  QRat(const Rat& c) : num_(c), den_(1) {}       // NOLINT(google-explicit-constructor)
  QRat(const LaurentQ& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  QRat(const LaurentQ& n, const LaurentQ& d) : num_(n), den_(d) { normalize(); }

  static QRat q_pow(int a) { return QRat(LaurentQ::q_pow(a)); }

  const LaurentQ& num() const { return num_; }
  const LaurentQ& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  /// True when the reduced denominator is 1 (value is a Laurent polynomial).
  bool is_laurent() const {
    return den_.terms().size() == 1 && den_.coeff_e2(den_.min_e2()) == 1;
  }
  /// The value as a Laurent polynomial; throws when the denominator is nontrivial.
  LaurentQ as_laurent() const {
    if (!is_laurent()) throw std::domain_error("QRat::as_laurent: nontrivial denominator");
    return num_ * LaurentQ::q_half_pow(-den_.min_e2());
  }

  friend QRat operator+(const QRat& a, const QRat& b) {
    return QRat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend QRat operator-(const QRat& a, const QRat& b) {
    return QRat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend QRat operator-(const QRat& a) { return QRat(-a.num_, a.den_, NoNorm{}); }
  friend QRat operator*(const QRat& a, const QRat& b) {
    return QRat(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend QRat operator/(const QRat& a, const QRat& b) {
    if (b.is_zero()) throw std::domain_error("QRat: division by zero");
    return QRat(a.num_ * b.den_, a.den_ * b.num_);
  }
  QRat& operator+=(const QRat& o) { return *this = *this + o; }
  QRat& operator-=(const QRat& o) { return *this = *this - o; }
  QRat& operator*=(const QRat& o) { return *this = *this * o; }
  QRat& operator/=(const QRat& o) { return *this = *this / o; }
  friend bool operator==(const QRat& a, const QRat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const QRat& a, const QRat& b) { return !(a == b); }

  /// q -> 1/q.
  QRat invert_q() const { return QRat(num_.invert_q(), den_.invert_q()); }
  /// Doubled-exponent substitution, see LaurentQ::subst_exponent.
  QRat subst_exponent(int numr, int denr = 1) const {
    return QRat(num_.subst_exponent(numr, denr), den_.subst_exponent(numr, denr));
  }

  Rat eval(const Rat& q0) const {
    Rat d = den_.eval(q0);
    if (d == 0) throw std::domain_error("QRat::eval: pole at q0");
    return num_.eval(q0) / d;
  }
  Rat eval_sqrt(const Rat& s0) const {
    Rat d = den_.eval_sqrt(s0);
    if (d == 0) throw std::domain_error("QRat::eval_sqrt: pole");
    return num_.eval_sqrt(s0) / d;
  }

  std::string to_string() const {
    if (is_laurent()) return as_laurent().to_string();
    return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
  }

 private:
  struct NoNorm {};
  QRat(const LaurentQ& n, const LaurentQ& d, NoNorm) : num_(n), den_(d) {}

  // Dense coefficient view of a Laurent polynomial shifted to valuation 0.
  static std::vector<Rat> dense(const LaurentQ& p, int* shift) {
    *shift = p.min_e2();
    std::vector<Rat> v(p.is_zero() ? 1 : p.max_e2() - p.min_e2() + 1, Rat(0));
    for (auto& [e, c] : p.terms()) v[e - *shift] = c;
    return v;
  }
  static LaurentQ from_dense(const std::vector<Rat>& v, int shift) {
    LaurentQ r;
    for (size_t i = 0; i < v.size(); ++i) r.add_term(static_cast<int>(i) + shift, v[i]);
    return r;
  }
  static void make_monic(std::vector<Rat>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    if (v.empty()) return;
    Rat lc = v.back();
    for (auto& c : v) c /= lc;
  }
  // Monic gcd of dense polynomials over Q.
  static std::vector<Rat> poly_gcd(std::vector<Rat> a, std::vector<Rat> b) {
    make_monic(a);
    make_monic(b);
    while (!b.empty()) {
      // a mod b
      std::vector<Rat> r = a;
      while (r.size() >= b.size()) {
        while (!r.empty() && r.back() == 0) r.pop_back();
        if (r.size() < b.size()) break;
        Rat f = r.back() / b.back();
        size_t off = r.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) r[off + i] -= f * b[i];
        r.pop_back();
      }
      while (!r.empty() && r.back() == 0) r.pop_back();
      a = std::move(b);
      b = std::move(r);
      make_monic(b);
    }
    return a;
  }
  static std::vector<Rat> poly_divexact(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    std::vector<Rat> r = a, q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rat(0));
    while (true) {
      while (!r.empty() && r.back() == 0) r.pop_back();
      if (r.empty() || r.size() < b.size()) break;
      Rat f = r.back() / b.back();
      q[r.size() - b.size()] = f;
      size_t off = r.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) r[off + i] -= f * b[i];
    }
    return q;
  }

  void normalize() {
    if (den_.is_zero()) throw std::domain_error("QRat: zero denominator");
    if (num_.is_zero()) {
      den_ = LaurentQ(1);
      return;
    }
    int sn = 0, sd = 0;
    std::vector<Rat> n = dense(num_, &sn), d = dense(den_, &sd);
    std::vector<Rat> g = poly_gcd(n, d);
    if (g.size() > 1) {
      n = poly_divexact(n, g);
      d = poly_divexact(d, g);
    }
    // Denominator monic with zero valuation; monomial part moves to numerator.
    while (!d.empty() && d.back() == 0) d.pop_back();
    Rat lc = d.back();
    for (auto& c : d) c /= lc;
    for (auto& c : n) c /= lc;
    num_ = from_dense(n, sn - sd);
    den_ = from_dense(d, 0);
  }

  LaurentQ num_, den_;
};

}  // namespace qmds
