/**
 * @file hecke.hpp
 * @brief Hecke-trace values T_{2k}(q0) recovered by inverting the Birch-Ihara
 *        identity from brute-force cubic moments, with the inverse-argument
 *        convention T_{2k}(1/q) = q^{1-2k} T_{2k}(q).
 */
#pragma once

#include "qmds/moments.hpp"

namespace qmds {

/// Factor a prime power q0 = p^e; throws if q0 is not an odd prime power.
inline std::pair<int, int> prime_power_split(long q0) {
  if (q0 < 3 || q0 % 2 == 0) throw std::invalid_argument("not an odd prime power");
  for (int p = 3; p <= q0; p += 2) {
    if (q0 % p != 0) continue;
    int e = 0;
    long r = q0;
    while (r % p == 0) {
      r /= p;
      ++e;
    }
    if (r != 1) throw std::invalid_argument("not a prime power");
    return {p, e};
  }
  throw std::invalid_argument("not an odd prime power");
}

/// Solve the Birch-Ihara identity
///   sum_{r=0}^{k-1} C(k+r-1, 2r) (-q)^{k-1-r} M3*(2r;q) = -T_{2k}(q) - 1,
/// with M3*(2r;q) = M3(2r;q)/(q(q-1)), for T_2, T_4, ..., T_{2kmax}.
/// Throws if a solved value is non-integral.
inline std::map<int, Int> birch_ihara_invert(long q0, int kmax) {
  auto [p, e] = prime_power_split(q0);
  const FiniteField& f = FieldRegistry::get(p, e);
  Rat norm = Rat(q0) * Rat(q0 - 1);
  std::map<int, Rat> m3star;
  for (int r = 0; r + 1 <= kmax; ++r) m3star[2 * r] = Rat(moment_M3(f, 2 * r)) / norm;
  std::map<int, Int> table;
  for (int k = 1; k <= kmax; ++k) {
    Rat s = 0;
    for (int r = 0; r <= k - 1; ++r) {
      Rat term = binomial(k + r - 1, 2 * r) * m3star[2 * r];
      for (int i = 0; i < k - 1 - r; ++i) term *= Rat(-q0);
      s += term;
    }
    Rat t = -s - 1;
    if (t.get_den() != 1)
      throw std::logic_error("birch_ihara_invert: non-integral Hecke trace");
    table[2 * k] = t.get_num();
  }
  return table;
}

/// Process-wide table of Hecke traces T_{2k}(q0), filled by Birch-Ihara
/// inversion on demand and persisted through the shared cache.
class HeckeTable {
 public:
  static HeckeTable& instance() {
    static HeckeTable t;
    return t;
  }

  /// Make sure T_2..T_{2kmax}(q0) are present.
  void ensure(long q0, int kmax) {
    if (covered_[q0] >= kmax) return;
    bool all_cached = true;
    std::map<int, Int> solved;
    for (int k = 1; k <= kmax && all_cached; ++k) {
      if (auto hit = DiskCache::instance().get(key(q0, 2 * k)))
        solved[2 * k] = Int(hit->c_str());
      else
        all_cached = false;
    }
    if (!all_cached) {
      solved = birch_ihara_invert(q0, kmax);
      for (auto& [tk, v] : solved) DiskCache::instance().put(key(q0, tk), v.get_str());
    }
    for (auto& [tk, v] : solved) entries_[{q0, tk}] = v;
    covered_[q0] = kmax;
  }

  /// T_{2k}(q0), computing the table up to 2k if needed.
  Int get(long q0, int two_k) {
    if (two_k < 2 || two_k % 2 != 0) throw std::invalid_argument("weight must be even >= 2");
    ensure(q0, two_k / 2);
    return entries_.at({q0, two_k});
  }

  /// T_{2k}(1/q0) := q0^{1-2k} T_{2k}(q0).
  Rat inverse_convention(long q0, int two_k) {
    Rat v(get(q0, two_k));
    for (int i = 0; i < two_k - 1; ++i) v /= Rat(q0);
    return v;
  }

 private:
  HeckeTable() = default;
  static std::string key(long q0, int two_k) {
    return "T|birch-ihara|" + std::to_string(q0) + "|" + std::to_string(two_k);
  }
  std::map<std::pair<long, int>, Int> entries_;
  std::map<long, int> covered_;
};

/// M3*(2r;q) from the solved Hecke table via the second (inverted) form of
/// the Birch-Ihara identity; used as a round-trip check against brute force.
inline Rat m3star_from_hecke(long q0, int r) {
  Rat v = Rat(factorial(2 * r)) / Rat(factorial(r) * factorial(r + 1));
  for (int i = 0; i < r + 1; ++i) v *= Rat(q0);
  for (int k = 1; k <= r; ++k) {
    Rat term = Rat((2 * k + 1) * factorial(2 * r)) /
               Rat(factorial(r - k) * factorial(r + k + 1));
    for (int i = 0; i < r - k; ++i) term *= Rat(q0);
    term *= Rat(HeckeTable::instance().get(q0, 2 * k + 2) + 1);
    v -= term;
  }
  return v;
}

}  // namespace qmds
