/**
 * @file polyspace.hpp
 * @brief Polynomials over F_q: evaluation, square-freeness, factorization
 *        type, irreducible counts, and enumeration of square-free strata.
 *
 * A stratum is the set of monic square-free polynomials with a prescribed
 * factorization type (n_1 linear factors, n_2 quadratic ones, ...).  Strata
 * are enumerated as multisets of distinct irreducibles per degree, so the
 * cost is proportional to the stratum size rather than to q^deg.
 */
#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qmds/ffield.hpp"
#include "qmds/laurent.hpp"

namespace qmds {

/// Moebius function.
inline int moebius(int n) {
  int r = 1;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      r = -r;
    }
  if (n > 1) r = -r;
  return r;
}

/// Irr_t(m) = (1/m) sum_{k|m} mu(m/k) t^k as an exact polynomial in t = q.
inline LaurentQ irr_count_poly(int m) {
  LaurentQ acc;
  for (int k = 1; k <= m; ++k) {
    if (m % k != 0 || moebius(m / k) == 0) continue;
    Rat c(moebius(m / k), m);
    c.canonicalize();
    acc += LaurentQ::monomial(c, 2 * k);
  }
  return acc;
}

/// Irr_q(m) at a concrete prime power.
inline long irr_count(long q, int m) {
  Rat v = irr_count_poly(m).eval(Rat(q));
  if (v.get_den() != 1) throw std::logic_error("irr_count: non-integral");
  return static_cast<long>(v.get_num().get_si());
}

/// Dense polynomial over F_q; coefficient codes c_0..c_deg, c_deg != 0
/// (except the zero polynomial, which has an empty coefficient list).
class Poly {
 public:
  Poly() : f_(nullptr) {}
  explicit Poly(const FiniteField& f) : f_(&f) {}
  Poly(const FiniteField& f, std::vector<long> coeffs) : f_(&f), c_(std::move(coeffs)) {
    trim();
  }
  /// Monic polynomial from the base-q code of its non-leading coefficients.
  static Poly monic_from_code(const FiniteField& f, int deg, long code) {
    std::vector<long> c(deg + 1, 0);
    for (int i = 0; i < deg; ++i, code /= f.q()) c[i] = code % f.q();
    c[deg] = 1;
    return Poly(f, std::move(c));
  }
  static Poly x(const FiniteField& f) { return Poly(f, {0, 1}); }
  static Poly constant(const FiniteField& f, long a) { return Poly(f, {a}); }

  const FiniteField& field() const { return *f_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  long coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : 0; }
  long leading() const { return c_.empty() ? 0 : c_.back(); }
  bool is_monic() const { return leading() == 1; }
  const std::vector<long>& coeffs() const { return c_; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator<(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
    return std::lexicographical_compare(a.c_.rbegin(), a.c_.rend(), b.c_.rbegin(),
                                        b.c_.rend());
  }

  Poly operator+(const Poly& o) const {
    std::vector<long> r(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = f_->add(coeff(i), o.coeff(i));
    return Poly(*f_, std::move(r));
  }
  Poly operator-(const Poly& o) const {
    std::vector<long> r(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = f_->sub(coeff(i), o.coeff(i));
    return Poly(*f_, std::move(r));
  }
  Poly operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly(*f_);
    std::vector<long> r(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i)
      if (c_[i])
        for (size_t j = 0; j < o.c_.size(); ++j)
          r[i + j] = f_->add(r[i + j], f_->mul(c_[i], o.c_[j]));
    return Poly(*f_, std::move(r));
  }
  Poly scaled(long a) const {
    std::vector<long> r(c_);
    for (auto& x : r) x = f_->mul(x, a);
    return Poly(*f_, std::move(r));
  }

  /// Remainder of *this modulo o.
  Poly mod(const Poly& o) const {
    if (o.is_zero()) throw std::domain_error("Poly::mod by zero");
    std::vector<long> r(c_);
    long linv = f_->inv(o.leading());
    while (static_cast<int>(r.size()) - 1 >= o.degree() && !r.empty()) {
      while (!r.empty() && r.back() == 0) r.pop_back();
      if (static_cast<int>(r.size()) - 1 < o.degree() || r.empty()) break;
      long fac = f_->mul(r.back(), linv);
      size_t off = r.size() - 1 - o.degree();
      for (int i = 0; i <= o.degree(); ++i)
        r[off + i] = f_->sub(r[off + i], f_->mul(fac, o.coeff(i)));
      r.pop_back();
    }
    return Poly(*f_, std::move(r));
  }

  Poly derivative() const {
    if (degree() < 1) return Poly(*f_);
    std::vector<long> r(c_.size() - 1, 0);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = f_->mul(c_[i], f_->from_int(i));
    return Poly(*f_, std::move(r));
  }

  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = a.mod(b);
      a = std::move(b);
      b = std::move(r);
    }
    if (!a.is_zero() && !a.is_monic()) a = a.scaled(a.field().inv(a.leading()));
    return a;
  }

  /// Evaluate at an element of F_q itself.
  long eval(long x) const {
    long acc = 0;
    for (int i = degree(); i >= 0; --i) acc = f_->add(f_->mul(acc, x), c_[i]);
    return acc;
  }
  /// Evaluate at an element of an extension, coefficients mapped through emb.
  long eval_embedded(const Embedding& emb, long theta) const {
    const FiniteField& big = emb.target();
    long acc = 0;
    for (int i = degree(); i >= 0; --i) acc = big.add(big.mul(acc, theta), emb(c_[i]));
    return acc;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      if (c_[i] == 0) continue;
      if (!first) os << " + ";
      first = false;
      if (i == 0 || c_[i] != 1) os << c_[i];
      if (i > 0) {
        if (c_[i] != 1) os << "*";
        os << "x";
        if (i > 1) os << "^" << i;
      }
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  const FiniteField* f_;
  std::vector<long> c_;
};

inline bool is_squarefree(const Poly& d) {
  if (d.is_zero()) return false;
  if (d.degree() <= 1) return true;
  return Poly::gcd(d, d.derivative()).degree() == 0;
}

/// Factorization type: counts[m] = number of irreducible factors of degree m.
using FactorType = std::map<int, int>;

inline int factor_type_weight(const FactorType& n) {
  int w = 0;
  for (auto& [m, c] : n) w += m * c;
  return w;
}

/// All monic irreducibles of degree m over F_q, cached per (p, e, m),
/// enumerated in increasing code order.
class IrreducibleCache {
 public:
  static const std::vector<Poly>& get(const FiniteField& f, int m) {
    static IrreducibleCache cache;
    auto key = std::make_tuple(f.p(), f.e(), m);
    auto it = cache.m_.find(key);
    if (it != cache.m_.end()) return it->second;
    std::vector<Poly> out;
    // A monic polynomial is irreducible iff no irreducible of degree <= m/2
    // divides it (with degree >= 1).
    long total = 1;
    for (int i = 0; i < m; ++i) {
      total *= f.q();
      if (total > 4000000) throw std::overflow_error("irreducible enumeration too large");
    }
    for (long code = 0; code < total; ++code) {
      Poly cand = Poly::monic_from_code(f, m, code);
      bool irred = true;
      for (int d = 1; irred && 2 * d <= m; ++d)
        for (const Poly& p : get(f, d)) {
          if (cand.mod(p).is_zero()) {
            irred = false;
            break;
          }
        }
      if (irred) out.push_back(cand);
    }
    return cache.m_.emplace(key, std::move(out)).first->second;
  }

  /// Textual dump of cached irreducibles: lines "p e m : c0,c1,..,1; ...".
  static void save(const FiniteField& f, int mmax, std::ostream& os) {
    for (int m = 1; m <= mmax; ++m) {
      os << f.p() << " " << f.e() << " " << m << " :";
      for (const Poly& p : get(f, m)) {
        os << " ";
        for (int i = 0; i <= p.degree(); ++i) os << (i ? "," : "") << p.coeff(i);
        os << ";";
      }
      os << "\n";
    }
  }

 private:
  std::map<std::tuple<int, int, int>, std::vector<Poly>> m_;
};

/// Visit every monic square-free polynomial of factorization type `ntype`
/// exactly once, in lexicographic order of the sorted factor lists.
inline void enumerate_stratum(const FactorType& ntype, const FiniteField& f,
                              const std::function<void(const Poly&)>& visit) {
  // Per degree, choose an n_m-subset of the irreducibles of degree m.
  std::vector<std::pair<int, int>> parts;  // (degree m, count n_m)
  for (auto& [m, c] : ntype)
    if (c > 0) parts.emplace_back(m, c);
  std::function<void(size_t, const Poly&)> rec = [&](size_t idx, const Poly& acc) {
    if (idx == parts.size()) {
      visit(acc);
      return;
    }
    auto [m, cnt] = parts[idx];
    const auto& irr = IrreducibleCache::get(f, m);
    int n = static_cast<int>(irr.size());
    if (cnt > n) return;
    std::vector<int> pick(cnt);
    std::function<void(int, int, const Poly&)> choose = [&](int start, int k, const Poly& cur) {
      if (k == cnt) {
        rec(idx + 1, cur);
        return;
      }
      for (int i = start; i <= n - (cnt - k); ++i) choose(i + 1, k + 1, cur * irr[i]);
    };
    choose(0, 0, acc);
  };
  rec(0, Poly::constant(f, 1));
}

/// Factorization type of a square-free monic polynomial by trial division.
inline FactorType factor_type(const Poly& d) {
  FactorType n;
  Poly rem = d;
  if (!rem.is_monic()) rem = rem.scaled(d.field().inv(d.leading()));
  for (int m = 1; rem.degree() > 0; ++m) {
    if (m > rem.degree()) throw std::logic_error("factor_type: ran past degree");
    for (const Poly& p : IrreducibleCache::get(d.field(), m)) {
      if (rem.degree() < m) break;
      if (rem.mod(p).is_zero()) {
        ++n[m];
        // exact division
        Poly quotient(d.field());
        {
          std::vector<long> r = rem.coeffs(), q(rem.degree() - m + 1, 0);
          while (static_cast<int>(r.size()) - 1 >= m) {
            long fac = r.back();
            size_t off = r.size() - 1 - m;
            q[off] = fac;
            for (int i = 0; i <= m; ++i)
              r[off + i] = d.field().sub(r[off + i], d.field().mul(fac, p.coeff(i)));
            while (!r.empty() && r.back() == 0) r.pop_back();
          }
          quotient = Poly(d.field(), std::move(q));
        }
        rem = quotient;
      }
    }
  }
  return n;
}

}  // namespace qmds
