/**
 * @file ffield.hpp
 * @brief Exact arithmetic in F_q and its extensions (q odd), the quadratic
 *        character, Frobenius, and Galois-orbit utilities.
 *
 * Elements of F_{p^e} are represented by integer codes in [0, p^e): the code
 * sum c_i p^i encodes the coefficient vector (c_0, ..., c_{e-1}) with respect
 * to the power basis of the canonical modulus (see moduli_table.hpp).
 * Multiplication runs through discrete-log tables built once per field, which
 * also makes the quadratic character a parity lookup.
 */
#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qmds/moduli_table.hpp"

namespace qmds {

constexpr long kFieldOrderCap = 2000;

class FiniteField {
 public:
  FiniteField(int p, int e) : p_(p), e_(e) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("FiniteField: p must be an odd prime");
    for (int d = 3; static_cast<long>(d) * d <= p; d += 2)
      if (p % d == 0) throw std::invalid_argument("FiniteField: p not prime");
    if (e < 1) throw std::invalid_argument("FiniteField: e must be >= 1");
    q_ = 1;
    for (int i = 0; i < e; ++i) {
      q_ *= p;
      if (q_ > kFieldOrderCap) throw std::invalid_argument("FiniteField: order exceeds cap 2000");
    }
    modulus_.assign(e_ + 1, 0);
    if (e_ == 1) {
      modulus_ = {0, 1};  // F_p as F_p[x]/(x)
    } else {
      bool found = false;
      for (auto& m : detail::kModuli)
        if (m.p == p_ && m.e == e_) {
          for (int i = 0; i <= e_; ++i) modulus_[i] = m.c[i];
          found = true;
          break;
        }
      if (!found) throw std::invalid_argument("FiniteField: no modulus tabulated for this (p, e)");
      verify_irreducible();
    }
    build_log_tables();
  }

  int p() const { return p_; }
  int e() const { return e_; }
  long q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }

  long zero() const { return 0; }
  long one() const { return 1; }
  /// Image of an integer under Z -> F_p subset F_q.
  long from_int(long n) const { return ((n % p_) + p_) % p_; }

  long add(long a, long b) const {
    long r = 0, mul = 1;
    for (int i = 0; i < e_; ++i) {
      r += ((a % p_ + b % p_) % p_) * mul;
      a /= p_;
      b /= p_;
      mul *= p_;
    }
    return r;
  }
  long neg(long a) const {
    long r = 0, mul = 1;
    for (int i = 0; i < e_; ++i) {
      r += ((p_ - a % p_) % p_) * mul;
      a /= p_;
      mul *= p_;
    }
    return r;
  }
  long sub(long a, long b) const { return add(a, neg(b)); }
  long mul(long a, long b) const {
    if (a == 0 || b == 0) return 0;
    return expt_[(logt_[a] + logt_[b]) % (q_ - 1)];
  }
  long inv(long a) const {
    if (a == 0) throw std::domain_error("FiniteField: inverse of 0");
    return expt_[(q_ - 1 - logt_[a]) % (q_ - 1)];
  }
  long pow(long a, long n) const {
    if (a == 0) return n == 0 ? 1 : 0;
    long l = (logt_[a] * (n % (q_ - 1))) % (q_ - 1);
    if (l < 0) l += q_ - 1;
    return expt_[l];
  }
  long frobenius(long a) const { return pow(a, p_); }
  long generator() const { return expt_[1]; }

  /// chi(x) = x^{(q-1)/2} mapped to {-1, 0, +1}; 0 at x = 0.
  int quadratic_char(long a) const {
    if (a == 0) return 0;
    return (logt_[a] % 2 == 0) ? 1 : -1;
  }

  /// Degree of x over the subfield of order qbase = p^ebase (ebase | e):
  /// the least d | (e / ebase) with x^{qbase^d} = x.
  int degree_over(long a, int ebase) const {
    if (e_ % ebase != 0) throw std::invalid_argument("degree_over: not a subfield");
    int m = e_ / ebase;
    long qbase = 1;
    for (int i = 0; i < ebase; ++i) qbase *= p_;
    for (int d = 1; d <= m; ++d) {
      if (m % d != 0) continue;
      // x^{qbase^d}
      long y = a;
      for (int i = 0; i < d; ++i) y = pow(y, qbase);
      if (y == a) return d;
    }
    throw std::logic_error("degree_over: unreachable");
  }

  /// All elements of exact degree d over the subfield of order p^ebase.
  std::vector<long> elements_of_exact_degree(int d, int ebase = 1) const {
    if (e_ % ebase != 0 || (e_ / ebase) % d != 0)
      throw std::invalid_argument("elements_of_exact_degree: d does not divide the extension degree");
    std::vector<long> out;
    for (long a = 0; a < q_; ++a)
      if (degree_over(a, ebase) == d) out.push_back(a);
    return out;
  }

 private:
  // Plain polynomial multiplication modulo the modulus, used only to bootstrap
  // the discrete-log tables.
  long polymul(long a, long b) const {
    std::vector<int> da(e_), db(e_), prod(2 * e_ - 1, 0);
    for (int i = 0; i < e_; ++i, a /= p_) da[i] = static_cast<int>(a % p_);
    for (int i = 0; i < e_; ++i, b /= p_) db[i] = static_cast<int>(b % p_);
    for (int i = 0; i < e_; ++i)
      if (da[i])
        for (int j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    for (int i = 2 * e_ - 2; i >= e_; --i) {
      int c = prod[i];
      if (c == 0) continue;
      prod[i] = 0;
      for (int j = 0; j < e_; ++j)
        prod[i - e_ + j] = ((prod[i - e_ + j] - c * modulus_[j]) % p_ + p_) % p_;
    }
    long r = 0, mul = 1;
    for (int i = 0; i < e_; ++i) {
      r += prod[i] * mul;
      mul *= p_;
    }
    return r;
  }

  long polypow(long a, long n) const {
    long acc = 1, base = a;
    while (n) {
      if (n & 1) acc = polymul(acc, base);
      base = polymul(base, base);
      n >>= 1;
    }
    return acc;
  }

  void verify_irreducible() const {
    // The modulus is irreducible iff x^{p^e} = x in F_p[x]/(f) and
    // x^{p^{e/l}} != x for every prime divisor l of e.
    long x = (e_ == 1) ? 0 : p_;  // the class of x
    auto frob_iter = [&](int k) {
      long y = x;
      for (int i = 0; i < k; ++i) y = polypow(y, p_);
      return y;
    };
    if (frob_iter(e_) != x) throw std::logic_error("modulus is not irreducible");
    int n = e_;
    for (int l = 2; l <= n; ++l) {
      if (n % l != 0) continue;
      while (n % l == 0) n /= l;
      if (frob_iter(e_ / l) == x) throw std::logic_error("modulus has a proper factor");
    }
  }

  void build_log_tables() {
    expt_.assign(q_ - 1, 0);
    logt_.assign(q_, -1);
    // Find a multiplicative generator.
    std::vector<long> primes;
    long n = q_ - 1;
    for (long d = 2; d * d <= n; ++d)
      if (n % d == 0) {
        primes.push_back(d);
        while (n % d == 0) n /= d;
      }
    if (n > 1) primes.push_back(n);
    long g = 0;
    for (long cand = 2; cand < q_; ++cand) {
      bool ok = true;
      for (long r : primes)
        if (polypow(cand, (q_ - 1) / r) == 1) {
          ok = false;
          break;
        }
      if (ok) {
        g = cand;
        break;
      }
    }
    if (g == 0 && q_ == 3) g = 2;
    if (g == 0) throw std::logic_error("no generator found");
    long cur = 1;
    for (long i = 0; i < q_ - 1; ++i) {
      expt_[i] = cur;
      logt_[cur] = i;
      cur = polymul(cur, g);
    }
    if (cur != 1) throw std::logic_error("generator order mismatch");
  }

  int p_, e_;
  long q_;
  std::vector<int> modulus_;
  std::vector<long> expt_, logt_;
};

/// Process-wide registry of constructed fields (fields are immutable).
class FieldRegistry {
 public:
  static const FiniteField& get(int p, int e) {
    static FieldRegistry reg;
    auto key = std::make_pair(p, e);
    auto it = reg.fields_.find(key);
    if (it == reg.fields_.end())
      it = reg.fields_.emplace(key, std::make_unique<FiniteField>(p, e)).first;
    return *it->second;
  }

 private:
  std::map<std::pair<int, int>, std::unique_ptr<FiniteField>> fields_;
};

/// Canonical embedding F_{p^e} -> F_{p^{e*m}}: the base generator's minimal
/// polynomial acquires roots in the big field; we send the power basis of the
/// small field to powers of the smallest such root, which is independent of
/// run order because element codes are canonical.
class Embedding {
 public:
  Embedding(const FiniteField& small, const FiniteField& big)
      : small_(&small), big_(&big) {
    if (small.p() != big.p() || big.e() % small.e() != 0)
      throw std::invalid_argument("Embedding: not a subfield pair");
    table_.assign(small.q(), 0);
    if (small.e() == 1) {
      for (long a = 0; a < small.q(); ++a) table_[a] = big.from_int(a);
      return;
    }
    // Smallest root of the small modulus inside the big field.
    long root = -1;
    for (long t = 0; t < big.q(); ++t) {
      long acc = 0;
      for (int i = small.e(); i >= 0; --i)
        acc = big.add(big.mul(acc, t), big.from_int(small.modulus()[i]));
      if (acc == 0) {
        root = t;
        break;
      }
    }
    if (root < 0) throw std::logic_error("Embedding: modulus has no root upstairs");
    std::vector<long> rpow(small.e());
    rpow[0] = 1;
    for (int i = 1; i < small.e(); ++i) rpow[i] = big.mul(rpow[i - 1], root);
    for (long a = 0; a < small.q(); ++a) {
      long acc = 0, aa = a;
      for (int i = 0; i < small.e(); ++i, aa /= small.p())
        acc = big.add(acc, big.mul(big.from_int(aa % small.p()), rpow[i]));
      table_[a] = acc;
    }
  }

  long operator()(long a) const { return table_[a]; }
  const FiniteField& source() const { return *small_; }
  const FiniteField& target() const { return *big_; }

 private:
  const FiniteField* small_;
  const FiniteField* big_;
  std::vector<long> table_;
};

/// Cached canonical embeddings.
inline const Embedding& get_embedding(const FiniteField& small, const FiniteField& big) {
  static std::map<std::pair<std::pair<int, int>, std::pair<int, int>>,
                  std::unique_ptr<Embedding>>
      cache;
  auto key = std::make_pair(std::make_pair(small.p(), small.e()),
                            std::make_pair(big.p(), big.e()));
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<Embedding>(small, big)).first;
  return *it->second;
}

}  // namespace qmds
