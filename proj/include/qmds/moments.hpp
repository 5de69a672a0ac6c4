/**
 * @file moments.hpp
 * @brief Moment sums over square-free strata: M_{mu,gamma}, the normalized
 *        Mtilde over all (not necessarily monic) square-free models, the
 *        specialized cubic/quartic moments M3/M4, the stratum series A_n and
 *        A_{n,i,j} with their iota-transforms, the sign-pattern counts
 *        N_{mu,nu}(d0, delta), and the character sums b_omega^{(s,t)}.
 */
#pragma once

#include <algorithm>
#include <sstream>
#include <tuple>

#include "qmds/cache.hpp"
#include "qmds/curves.hpp"

namespace qmds {

/// Falling factorial a (a-1) ... (a-n+1); 1 for n = 0.
inline Int falling_factorial(long a, int n) {
  Int r = 1;
  for (int i = 0; i < n; ++i) r *= Int(a - i);
  return r;
}

/// Compact "1^2.3^1" form of a factorization type, "0" when empty.
inline std::string factor_type_string(const FactorType& t) {
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : t) {
    if (c == 0) continue;
    if (!first) os << ".";
    first = false;
    os << m << "^" << c;
  }
  return first ? "0" : os.str();
}

/// Trace vectors (a_1(C_d), ..., a_jmax(C_d)) for every d in the monic
/// square-free stratum of type `mu`, memoized per (field, mu, jmax).
inline const std::vector<std::vector<long>>& stratum_trace_vectors(const FiniteField& f,
                                                                   const FactorType& mu,
                                                                   int jmax) {
  static std::map<std::tuple<int, int, std::string, int>, std::vector<std::vector<long>>> memo;
  auto key = std::make_tuple(f.p(), f.e(), factor_type_string(mu), jmax);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  std::vector<std::vector<long>> out;
  enumerate_stratum(mu, f, [&](const Poly& d) { out.push_back(trace_sums(d, jmax)); });
  return memo.emplace(key, std::move(out)).first->second;
}

/// M_{mu,gamma}(q) = sum over monic square-free d of type mu of
/// prod_j a_j(C_d)^{gamma_j}, exact.
inline Int moment_M(const FiniteField& f, const FactorType& mu, const FactorType& gamma) {
  std::ostringstream key;
  key << "M|" << f.p() << "^" << f.e() << "|" << factor_type_string(mu) << "|"
      << factor_type_string(gamma);
  if (auto hit = DiskCache::instance().get(key.str())) return Int(hit->c_str());
  int jmax = gamma.empty() ? 0 : gamma.rbegin()->first;
  Int total = 0;
  for (const auto& a : stratum_trace_vectors(f, mu, jmax)) {
    Int term = 1;
    for (auto& [j, g] : gamma)
      for (int i = 0; i < g; ++i) term *= Int(a[j - 1]);
    total += term;
  }
  DiskCache::instance().put(key.str(), total.get_str());
  return total;
}

/// Moment of a_1(C_d)^r over all monic square-free d of the given degree,
/// by direct enumeration (a_1 = -[deg even] - sum_theta chi(d(theta))).
inline Int moment_a1_power(const FiniteField& f, int deg, int r) {
  std::ostringstream key;
  key << "Mdeg" << deg << "|" << f.p() << "^" << f.e() << "|" << r;
  if (auto hit = DiskCache::instance().get(key.str())) return Int(hit->c_str());
  long q = f.q(), total_codes = 1;
  for (int i = 0; i < deg; ++i) total_codes *= q;
  long boundary = (deg % 2 == 0) ? 1 : 0;
  Int total = 0;
  for (long code = 0; code < total_codes; ++code) {
    Poly d = Poly::monic_from_code(f, deg, code);
    if (!is_squarefree(d)) continue;
    long s = 0;
    for (long t = 0; t < q; ++t) s += f.quadratic_char(d.eval(t));
    Int a = -boundary - s, term = 1;
    for (int i = 0; i < r; ++i) term *= a;
    total += term;
  }
  DiskCache::instance().put(key.str(), total.get_str());
  return total;
}

/// M3(r;q): moment of a_1^r over monic square-free cubics.
inline Int moment_M3(const FiniteField& f, int r) { return moment_a1_power(f, 3, r); }
/// M4(r;q): moment of a_1^r over monic square-free quartics.
inline Int moment_M4(const FiniteField& f, int r) { return moment_a1_power(f, 4, r); }

/// Normalized moment over all square-free models: for nu a partition of
/// 2g+2 (ramification types, the place at infinity contributing a part 1 for
/// odd-degree models),
///   Mtilde_{nu,gamma}(q) = |GL_2(F_q)|^{-1} sum_{d} prod_j a_j(C_d)^{gamma_j}
/// over square-free d (any leading coefficient) of degree 2g+1 with
/// factorization type nu minus one part 1, or degree 2g+2 with type nu.
inline Rat moment_Mtilde(const FiniteField& f, const FactorType& nu, const FactorType& gamma) {
  int w = factor_type_weight(nu);
  if (w < 4 || w % 2 != 0) throw std::invalid_argument("moment_Mtilde: |nu| must be even >= 4");
  int jmax = gamma.empty() ? 0 : gamma.rbegin()->first;
  Int total = 0;
  auto accumulate = [&](const FactorType& type) {
    enumerate_stratum(type, f, [&](const Poly& d) {
      for (long c = 1; c < f.q(); ++c) {
        Poly dc = d.scaled(c);
        Int term = 1;
        for (auto& [j, g] : gamma)
          for (int i = 0; i < g; ++i) term *= Int(trace_sum(dc, j));
        total += term;
      }
    });
  };
  accumulate(nu);
  auto it = nu.find(1);
  if (it != nu.end() && it->second > 0) {
    FactorType odd = nu;
    if (--odd[1] == 0) odd.erase(1);
    accumulate(odd);
  }
  Rat gl2 = Rat(f.q()) * Rat(f.q() + 1) * Rat(f.q() - 1) * Rat(f.q() - 1);
  Rat r(total);
  return r / gl2;
}

/// E(cT) = prod_i (1 - c t_i)^{-1} on the given contract.
inline Series<Rat> series_E(const SeriesSpec& spec, const Rat& c) {
  Series<Rat> acc = Series<Rat>::one(spec);
  for (int k = 0; k < spec.nvars; ++k) {
    Series<Rat> fk = Series<Rat>::one(spec);
    Series<Rat>::Exp e(spec.nvars, 0);
    e[k] = 1;
    fk.add_coeff(e, -c);
    acc *= fk.inverse();
  }
  return acc;
}

/// A_n(T,q) = sum over the monic square-free stratum of type n of
/// prod_k P_{C_d}(t_k); zero for the empty partition by convention.
inline Series<Rat> series_A(const FiniteField& f, const FactorType& ntype,
                            const SeriesSpec& spec) {
  Series<Rat> total(spec);
  if (factor_type_weight(ntype) == 0) return total;
  enumerate_stratum(ntype, f, [&](const Poly& d) { total += char_poly_series(d, spec); });
  return total;
}

/// A_{n,i,j}(T,q): the stratum series weighted by falling factorials of the
/// split data,
///   prod_m ((c_m+a*_m)/2m)_(j_m) * ((c_m-a*_m)/2m)_(i_m),
/// where (x)_(k) is the falling factorial.  With iota set, a*_m picks up the
/// sign (-1)^m and T is replaced by -T.  For the empty partition n = 0 the
/// values are fixed by the generating identity
///   sum A_{0,i,j} Y^i Z^j / i! j! = E(T) E(qT) [-1 + prod_m (1+Z_m)^{Irr_q(m)}]
/// and its iota counterpart (Y at odd m, Z at even m, T -> -T).
inline Series<Rat> series_Aij(const FiniteField& f, const FactorType& ntype,
                              const FactorType& itype, const FactorType& jtype,
                              const SeriesSpec& spec, bool iota = false) {
  if (factor_type_weight(ntype) == 0) {
    Int w = 1;
    bool nonzero = !(itype.empty() && jtype.empty());
    if (!iota) {
      if (!itype.empty()) nonzero = false;
      for (auto& [m, c] : jtype) w *= falling_factorial(irr_count(f.q(), m), c);
    } else {
      for (auto& [m, c] : itype) {
        if (m % 2 == 0) nonzero = false;
        w *= falling_factorial(irr_count(f.q(), m), c);
      }
      for (auto& [m, c] : jtype) {
        if (m % 2 == 1) nonzero = false;
        w *= falling_factorial(irr_count(f.q(), m), c);
      }
    }
    if (!nonzero) return Series<Rat>(spec);
    Rat sign = iota ? Rat(-1) : Rat(1);
    return (series_E(spec, sign) * series_E(spec, sign * Rat(f.q()))).scaled(Rat(w));
  }
  int mmax = 0;
  if (!itype.empty()) mmax = std::max(mmax, itype.rbegin()->first);
  if (!jtype.empty()) mmax = std::max(mmax, jtype.rbegin()->first);
  Series<Rat> total(spec);
  enumerate_stratum(ntype, f, [&](const Poly& d) {
    SplitData sd = split_data(d, mmax);
    Int w = 1;
    for (int m = 1; m <= mmax; ++m) {
      int im = itype.count(m) ? itype.at(m) : 0;
      int jm = jtype.count(m) ? jtype.at(m) : 0;
      if (im == 0 && jm == 0) continue;
      long sign = (iota && m % 2 == 1) ? -1 : 1;
      long plus = sd.csum[m] + sign * sd.astar[m], minus = sd.csum[m] - sign * sd.astar[m];
      if (plus % (2 * m) != 0 || minus % (2 * m) != 0)
        throw std::logic_error("series_Aij: non-integral orbit count");
      w *= falling_factorial(plus / (2 * m), jm) * falling_factorial(minus / (2 * m), im);
    }
    Series<Rat> p = char_poly_series(d, spec);
    if (iota) {
      std::vector<int> all(spec.nvars);
      for (int k = 0; k < spec.nvars; ++k) all[k] = k;
      p = p.negate_variables(all);
    }
    total += p.scaled(Rat(w));
  });
  return total;
}

/// One tuple-group of the N_{mu,nu} count: all theta_j in the group have the
/// same exact degree `omega`, and `deltas` prescribes the chi signs.
struct SignGroup {
  int omega = 1;
  std::vector<int> deltas;  // each +1 or -1
};

struct NCount {
  Int direct;
  Int formula;
};

/// N_{mu,nu}(d0, delta): the number of tuples (theta_j), theta_j of exact
/// degree mu_j with pairwise distinct Galois orbits (within each degree) and
/// d0(theta_j) != 0, such that chi_{mu_j}(d0(theta_j)) = delta_j.  Computed
/// both by direct enumeration and by the closed falling-factorial formula
///   prod_i ((c+a*)/2w)_(n+) ((c-a*)/2w)_(n-) w^{n_i},  n+- = (n_i +- |delta|)/2,
/// which requires the group sizes n_i and sign sums; throws if they disagree.
inline NCount count_N(const Poly& d0, const std::vector<SignGroup>& groups) {
  const FiniteField& base = d0.field();
  int mmax = 1;
  for (const auto& g : groups) mmax = std::max(mmax, g.omega);
  SplitData sd = split_data(d0, mmax);
  NCount out{1, 1};
  for (const auto& g : groups) {
    int w = g.omega, n = static_cast<int>(g.deltas.size());
    // direct: ordered tuples of elements, distinct orbits, prescribed signs
    const FiniteField& big = FieldRegistry::get(base.p(), base.e() * w);
    const Embedding& emb = get_embedding(base, big);
    struct El {
      long orbit;
      int chi;
    };
    std::vector<El> els;
    for (long theta : big.elements_of_exact_degree(w, base.e())) {
      int ch = big.quadratic_char(d0.eval_embedded(emb, theta));
      if (ch == 0) continue;
      long orbit = theta, it = theta;
      for (int k = 1; k < w; ++k) {
        for (int s = 0; s < base.e(); ++s) it = big.frobenius(it);
        orbit = std::min(orbit, it);
      }
      els.push_back({orbit, ch});
    }
    Int count = 0;
    std::vector<long> used;
    std::function<void(int)> rec = [&](int pos) {
      if (pos == n) {
        count += 1;
        return;
      }
      for (const El& el : els) {
        if (el.chi != g.deltas[pos]) continue;
        if (std::find(used.begin(), used.end(), el.orbit) != used.end()) continue;
        used.push_back(el.orbit);
        rec(pos + 1);
        used.pop_back();
      }
    };
    rec(0);
    out.direct *= count;
    // closed form
    long sum_delta = 0;
    for (int dl : g.deltas) sum_delta += dl;
    if ((n + sum_delta) % 2 != 0) throw std::logic_error("count_N: bad sign sum parity");
    long np = (n + sum_delta) / 2, nm = (n - sum_delta) / 2;
    long plus = sd.csum[w] + sd.astar[w], minus = sd.csum[w] - sd.astar[w];
    if (plus % (2 * w) != 0 || minus % (2 * w) != 0)
      throw std::logic_error("count_N: non-integral orbit count");
    Int part = falling_factorial(plus / (2 * w), static_cast<int>(np)) *
               falling_factorial(minus / (2 * w), static_cast<int>(nm));
    for (int i = 0; i < n; ++i) part *= Int(w);
    out.formula *= part;
  }
  if (out.direct != out.formula) throw std::logic_error("count_N: direct != closed form");
  return out;
}

struct CharsumB {
  Int direct;
  Int via_gf;
};

/// b_omega^{(s,t)}(d0) = sum over ordered (s+t)-tuples of exact-degree-omega
/// elements with pairwise distinct Galois orbits, of
/// prod_{first s} chi_omega(d0(theta)) * prod_{last t} chi_omega(d0(theta))^2;
/// computed directly and via the generating function
///   sum_s b^{(s,0)} X^s/s! = (1+wX)^{(c+a*)/2w} (1-wX)^{(c-a*)/2w}
/// combined with b^{(s,t)} = b^{(s,0)} prod_{j<t} (c - ws - wj).  Throws if
/// the two routes disagree.
inline CharsumB charsum_b(const Poly& d0, int omega, int s, int t) {
  const FiniteField& base = d0.field();
  const FiniteField& big = FieldRegistry::get(base.p(), base.e() * omega);
  const Embedding& emb = get_embedding(base, big);
  struct El {
    long orbit;
    int chi;
  };
  std::vector<El> els;
  for (long theta : big.elements_of_exact_degree(omega, base.e())) {
    int ch = big.quadratic_char(d0.eval_embedded(emb, theta));
    long orbit = theta, it = theta;
    for (int k = 1; k < omega; ++k) {
      for (int e = 0; e < base.e(); ++e) it = big.frobenius(it);
      orbit = std::min(orbit, it);
    }
    els.push_back({orbit, ch});
  }
  Int direct = 0;
  std::vector<long> used;
  std::function<void(int, Int)> rec = [&](int pos, Int prod) {
    if (pos == s + t) {
      direct += prod;
      return;
    }
    for (const El& el : els) {
      if (std::find(used.begin(), used.end(), el.orbit) != used.end()) continue;
      int factor = pos < s ? el.chi : el.chi * el.chi;
      if (factor == 0) continue;
      used.push_back(el.orbit);
      rec(pos + 1, prod * factor);
      used.pop_back();
    }
  };
  rec(0, Int(1));
  SplitData sd = split_data(d0, omega);
  long c = sd.csum[omega], as = sd.astar[omega];
  if ((c + as) % (2 * omega) != 0 || (c - as) % (2 * omega) != 0)
    throw std::logic_error("charsum_b: non-integral orbit count");
  long A = (c + as) / (2 * omega), B = (c - as) / (2 * omega);
  // s! * [X^s] (1+wX)^A (1-wX)^B
  Rat gf = 0;
  for (int h = 0; h <= s; ++h) {
    Rat term = binomial(A, h) * binomial(B, s - h);
    for (int i = 0; i < s; ++i) term *= Rat(omega);
    if ((s - h) % 2 == 1) term = -term;
    gf += term;
  }
  gf *= Rat(factorial(s));
  for (int j = 0; j < t; ++j) gf *= Rat(c - omega * s - omega * j);
  if (gf.get_den() != 1) throw std::logic_error("charsum_b: non-integral value");
  Int gfz = gf.get_num();
  if (direct != gfz) throw std::logic_error("charsum_b: direct != generating function");
  return {direct, gfz};
}

}  // namespace qmds
