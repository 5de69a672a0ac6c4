/**
 * @file lambda.hpp
 * @brief Coefficients lambda(kappa, l; q) of the moment multiple Dirichlet
 *        series for l <= 4: explicit closed forms for l = 2 and l = 3, the
 *        full fourth-moment assembly with its recurrence and dominance
 *        filtering, the r <= 3 rational-function oracle, a brute-force
 *        evaluation of the defining Dirichlet-series identity over F_q[x],
 *        and exact checks of the two functional equations.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "qmds/curves.hpp"
#include "qmds/hecke.hpp"
#include "qmds/weil.hpp"

namespace qmds {

/// A tuple of non-negative part exponents (kappa_1, ..., kappa_r).
using Kappa = std::vector<int>;

inline int kappa_weight(const Kappa& k) {
  int s = 0;
  for (int x : k) s += x;
  return s;
}

/// Canonical form: drop zero parts, sort descending.
inline Kappa kappa_sorted(Kappa k) {
  std::erase(k, 0);
  std::sort(k.begin(), k.end(), std::greater<int>());
  return k;
}

/// q^e as a pure-Laurent Weil element.
inline WeilElement w_qpow(int e, const Rat& c = Rat(1)) {
  return WeilElement::monomial(c, 2 * e, 0);
}

/// Call f on every exponent tuple e with 0 <= e_i <= caps_i.
template <class F>
inline void for_each_tuple(const std::vector<int>& caps, F&& f) {
  std::vector<int> e(caps.size(), 0);
  while (true) {
    f(e);
    size_t i = 0;
    for (; i < caps.size(); ++i) {
      if (e[i] < caps[i]) {
        ++e[i];
        break;
      }
      e[i] = 0;
    }
    if (i == caps.size()) break;
  }
}

// ------------------------------------------------------------------ l = 2 ---

/// The residue coefficient entering the second-moment formula: the z^{-1}
/// coefficient of (z^2 - q)/(z(z-1)) * (q/z + z)^s, as a polynomial in q.
inline LaurentQ residue_coefficient(int s) {
  LaurentQ r;
  for (int m = 0; m <= s; ++m) {
    Rat b = binomial(s, m);
    if (2 * m - s >= 0) r += LaurentQ::monomial(b, 2 * (m + 1));
    if (2 * m - s - 2 >= 0) r += LaurentQ::monomial(-b, 2 * m);
  }
  return r;
}

/// lambda(kappa, 2; q): sum over sub-tuples kappa' <= kappa with entries in
/// {0,1,2} of (-1)^{r1} q^{|kappa - kappa'| + r2 + 1} res(r1), where r1 and r2
/// count the entries of kappa' equal to 1 and 2.  Always a pure Laurent
/// polynomial in q.
inline WeilElement lambda_l2(const Kappa& kappa) {
  std::vector<int> caps(kappa.size());
  for (size_t i = 0; i < kappa.size(); ++i) caps[i] = std::min(kappa[i], 2);
  LaurentQ out;
  int total = kappa_weight(kappa);
  for_each_tuple(caps, [&](const std::vector<int>& kp) {
    int r1 = 0, r2 = 0, sub = 0;
    for (int x : kp) {
      sub += x;
      if (x == 1) ++r1;
      if (x == 2) ++r2;
    }
    LaurentQ t = residue_coefficient(r1) * LaurentQ::monomial(Rat(r1 % 2 ? -1 : 1), 2 * (total - sub + r2 + 1));
    out += t;
  });
  return WeilElement(out);
}

/// Closed form for lambda((1,...,1), 2; q) with r ones:
/// sum_{j=1}^{floor(r/2)} r! q^{r+2-j} / ((r-j+1)(r-j) j! (j-1)! (r-2j)!).
inline WeilElement lambda_l2_ones(int r) {
  LaurentQ out;
  if (r == 0) return w_qpow(2);
  for (int j = 1; 2 * j <= r; ++j) {
    Rat c = Rat(factorial(r)) /
            Rat(Int(r - j + 1) * Int(r - j) * factorial(j) * factorial(j - 1) * factorial(r - 2 * j));
    out += LaurentQ::monomial(c, 2 * (r + 2 - j));
  }
  return WeilElement(out);
}

// ------------------------------------------------------------------ l = 3 ---

/// The normalized cubic moment M3*(r; q) expressed over the Weil basis:
/// Cat(R) q^{R+1} - sum_{k=1}^{R} (2k+1)(2R)!/((R-k)!(R+k+1)!) q^{R-k}
/// (T_{2k+2} + 1) for r = 2R even, and 0 for r odd.
inline WeilElement m3star_weil(int r) {
  WeilElement out;
  if (r % 2) return out;
  int R = r / 2;
  out += w_qpow(R + 1, Rat(factorial(2 * R)) / Rat(factorial(R) * factorial(R + 1)));
  for (int k = 1; k <= R; ++k) {
    Rat c = Rat(Int(2 * k + 1) * factorial(2 * R)) / Rat(factorial(R - k) * factorial(R + k + 1));
    out += WeilElement::monomial(-c, 2 * (R - k), k + 1);  // T_{2k+2} part
    out += w_qpow(R - k, -c);                              // the +1 part
  }
  return out;
}

/// M3(r; q) = q(q-1) M3*(r; q).
inline WeilElement m3_weil(int r) {
  return w_qpow(2) * m3star_weil(r) - w_qpow(1) * m3star_weil(r);
}

/// lambda(kappa, 3; q), closed form.  Nonzero only when every part of kappa
/// lies in {1, 2} and the number r1 of parts equal to 1 is even, r1 = 2R:
/// Cat(R) q^{R+r2+3} - sum_{j=1}^{R} (2j+1)(2R)!/((R-j)!(R+j+1)!)
/// q^{R+r2-j+2} T_{2j+2}.
inline WeilElement lambda_l3(const Kappa& kappa) {
  WeilElement out;
  int r1 = 0, r2 = 0;
  for (int x : kappa) {
    if (x == 1) ++r1;
    if (x == 2) ++r2;
  }
  if (r1 + 2 * r2 != kappa_weight(kappa) || r1 % 2) return out;
  int R = r1 / 2;
  out += w_qpow(R + r2 + 3, Rat(factorial(2 * R)) / Rat(factorial(R) * factorial(R + 1)));
  for (int j = 1; j <= R; ++j) {
    Rat c = Rat(Int(2 * j + 1) * factorial(2 * R)) / Rat(factorial(R - j) * factorial(R + j + 1));
    out += WeilElement::monomial(-c, 2 * (R + r2 - j + 2), j + 1);
  }
  return out;
}

/// The full third-moment prime sum a(kappa, 3; q) = q^{|kappa|+3}
/// lambda(kappa, 3; 1/q) + lambda(kappa, 3; q) + interaction terms, computed
/// from the assembled third moment: q(q-1) [ q^{r2} M3*(r1; q) +
/// sum_{kappa' <= kappa, entries differ by at most 1} (-1)^{|kappa - kappa'|}
/// q^{|kappa'| + 2} lambda(kappa', 2; 1/q) ] in the nonvanishing support, 0
/// outside it.
inline WeilElement a3_weil(const Kappa& kappa) {
  WeilElement out;
  int r1 = 0, r2 = 0;
  for (int x : kappa) {
    if (x == 1) ++r1;
    if (x == 2) ++r2;
  }
  if (r1 + 2 * r2 != kappa_weight(kappa) || r1 % 2) return out;
  WeilElement inner = w_qpow(r2) * m3star_weil(r1);
  std::vector<int> caps(kappa.size());
  for (size_t i = 0; i < kappa.size(); ++i) caps[i] = std::min(kappa[i], 1);
  for_each_tuple(caps, [&](const std::vector<int>& dec) {
    Kappa kp(kappa.size());
    int drop = 0;
    for (size_t i = 0; i < kappa.size(); ++i) {
      kp[i] = kappa[i] - dec[i];
      drop += dec[i];
    }
    WeilElement lam2inv(lambda_l2(kp).as_laurent().invert_q());
    inner += w_qpow(kappa_weight(kp) + 2, Rat(drop % 2 ? -1 : 1)) * lam2inv;
  });
  return w_qpow(2) * inner - w_qpow(1) * inner;
}

/// lambda(kappa, 3; q) recovered from a(kappa, 3; q) by the dominance
/// principle: a is antisymmetric under x -> q^{|kappa|+3+1}/x on the Weil
/// numbers, and lambda keeps exactly the terms of weight strictly above
/// (|kappa|+4)/2.  Throws if the antisymmetry or the strict-dominance gap
/// fails.
inline WeilElement lambda_l3_recurrence(const Kappa& kappa) {
  WeilElement a = a3_weil(kappa);
  int w = kappa_weight(kappa);
  if (a != -(w_qpow(w + 4) * a.sigma()))
    throw std::logic_error("third-moment prime sum is not antisymmetric");
  return a.dominant_part(w + 4, /*forbid_boundary=*/true);
}

/// lambda(kappa, l; q) as a Weil element, for l <= 3.
inline WeilElement lambda_weil(const Kappa& kappa, int l) {
  Kappa k = kappa_sorted(kappa);
  switch (l) {
    case 0:
      return w_qpow(kappa_weight(k));
    case 1:
      return k.empty() ? w_qpow(1) : WeilElement();
    case 2:
      return lambda_l2(k);
    case 3:
      return lambda_l3(k);
    default:
      throw std::invalid_argument("lambda_weil: l must be <= 3");
  }
}

// ------------------------------------------------------------------ l = 4 ---

/// The assembled fourth moment, as power series in t_1..t_r over the Weil
/// ring.  `gamma_times_a4` carries the gamma factor E(T) = prod 1/(1 - t_i);
/// `a4` is the bare coefficient series sum_kappa a(kappa, 4; q) T^kappa.
struct A4Assembly {
  Series<WeilElement> gamma_times_a4;
  Series<WeilElement> a4;
};

/// Assemble the fourth moment from the lower ones: the non-degenerate cubic
/// part plus the five degenerate correction series built from Lambda_2 and
/// Lambda_3 at inverted argument.
inline A4Assembly assemble_A4(const SeriesSpec& spec) {
  const int r = spec.nvars;
  using S = Series<WeilElement>;
  const WeilElement one(1);
  const WeilElement qm1 = w_qpow(1) - one;     // q - 1
  const WeilElement qm2 = w_qpow(1) - one - one;  // q - 2
  const Rat half(1, 2);

  auto geom = [&](int i, const WeilElement& ratio) {
    // 1 / (1 - ratio * t_i)
    S g(spec);
    WeilElement acc = one;
    std::vector<int> e(r, 0);
    for (int k = 0;; ++k) {
      e[i] = k;
      if (!spec.admits(e)) break;
      g.set_coeff(e, acc);
      acc *= ratio;
    }
    return g;
  };

  S EqT = S::one(spec), invE = S::one(spec), invEm = S::one(spec);
  for (int i = 0; i < r; ++i) {
    EqT *= geom(i, w_qpow(1));
    S lin = S::one(spec), linp = S::one(spec);
    std::vector<int> e(r, 0);
    e[i] = 1;
    if (spec.admits(e)) {
      lin.set_coeff(e, -one);
      linp.set_coeff(e, one);
    }
    invE *= lin;    // prod (1 - t_i)  =  1/E(T)
    invEm *= linp;  // prod (1 + t_i)  =  1/E(-T)
  }

  // Lambda_2(sign * q^a T^(2 or 1), 1/q^m) as a series in T.
  auto lam2_series = [&](int a, int m, int sign, bool square) {
    S out(spec);
    for_each_tuple(spec.caps, [&](const std::vector<int>& e) {
      std::vector<int> tgt = e;
      if (square)
        for (int& x : tgt) x *= 2;
      if (!spec.admits(tgt)) return;
      Kappa k = kappa_sorted(Kappa(e.begin(), e.end()));
      LaurentQ lam = lambda_l2(k).as_laurent();
      if (lam.is_zero()) return;
      int tot = kappa_weight(Kappa(e.begin(), e.end()));
      Rat s((sign < 0 && tot % 2) ? -1 : 1);
      LaurentQ c = lam.subst_exponent(-m) * LaurentQ::monomial(s, 2 * a * tot);
      out.add_coeff(tgt, WeilElement(c));
    });
    return out;
  };

  // Lambda_3(q T, 1/q) as a series in T.
  S lam3q(spec);
  for_each_tuple(spec.caps, [&](const std::vector<int>& e) {
    Kappa k = kappa_sorted(Kappa(e.begin(), e.end()));
    WeilElement lam = lambda_l3(k);
    if (lam.is_zero()) return;
    lam3q.set_coeff(e, w_qpow(kappa_weight(k)) * lam.sigma());
  });

  // Non-degenerate part: coefficient q^{r2+1} M3(r1) + q^{r2} M3(r1+1) at
  // kappa with all parts in {1, 2}.
  S nd(spec);
  for_each_tuple(spec.caps, [&](const std::vector<int>& e) {
    int r1 = 0, r2 = 0, tot = 0;
    for (int x : e) {
      tot += x;
      if (x == 1) ++r1;
      if (x == 2) ++r2;
    }
    if (r1 + 2 * r2 != tot) return;
    WeilElement c = w_qpow(r2 + 1) * m3_weil(r1) + w_qpow(r2) * m3_weil(r1 + 1);
    if (!c.is_zero()) nd.set_coeff(e, c);
  });

  const WeilElement q5h = w_qpow(5, half) * qm1;  // q^5 (q-1)/2
  S p_sq = (EqT * lam2_series(2, 2, +1, true) * invEm).scaled(q5h);
  S l2q = lam2_series(1, 1, +1, false);
  S p_pair = (EqT * l2q * l2q * invE).scaled(q5h);
  S p_diag = (l2q * invE).scaled(w_qpow(3, half) * qm1 * qm2) +
             (lam2_series(1, 1, -1, false) * invEm).scaled(w_qpow(4, half) * qm1);
  S p_cubic = lam3q.scaled(w_qpow(4) * qm1);

  A4Assembly out;
  out.gamma_times_a4 = nd + p_sq + p_pair + p_diag + p_cubic;
  out.a4 = out.gamma_times_a4 * invE;
  return out;
}

/// Check the fourth-moment functional equation coefficient-wise: each
/// coefficient s_kappa of the gamma-factored series satisfies
/// s_kappa = -q^{5+|kappa|} sigma(s_kappa).
inline bool a4_functional_equation_holds(const Series<WeilElement>& gamma_times_a4) {
  for (auto& [e, c] : gamma_times_a4.terms()) {
    int w = 0;
    for (int x : e) w += x;
    if (c != -(w_qpow(5 + w) * c.sigma())) return false;
  }
  return true;
}

/// Structural constraints on lambda(kappa, 4; q) after removing the
/// identically-vanishing symbols: the symbol-free part P_0 has q-degree at
/// most |kappa|+4 and is divisible by q^{floor((|kappa|+1)/2)+3}; the
/// coefficient of T_{2j+2} (j >= 5) has degree at most |kappa|-2j+3 and is
/// divisible by q^{floor(|kappa|/2)-j+3}.  Throws std::domain_error on
/// violation.
inline void check_lambda4_shape(const Kappa& kappa, const WeilElement& v) {
  const int w = kappa_weight(kappa);
  WeilElement t = v.drop_trivial_symbols();
  auto fail = [&](const std::string& what) {
    throw std::domain_error("lambda_l4 shape violation (" + what + ") at kappa weight " +
                            std::to_string(w) + ": " + v.to_string());
  };
  LaurentQ p0 = t.symbol_coeff(0);
  if (!p0.is_zero()) {
    if (p0.max_e2() > 2 * (w + 4)) fail("degree of symbol-free part");
    if (p0.min_e2() < 2 * ((w + 1) / 2 + 3)) fail("divisibility of symbol-free part");
  }
  for (int sym = 6; sym <= t.max_symbol(); ++sym) {
    LaurentQ pj = t.symbol_coeff(sym);
    if (pj.is_zero()) continue;
    int j = sym - 1;
    if (pj.max_e2() > 2 * (w - 2 * j + 3)) fail("degree of T_" + std::to_string(2 * sym) + " part");
    if (pj.min_e2() < 2 * (w / 2 - j + 3)) fail("divisibility of T_" + std::to_string(2 * sym) + " part");
  }
}

/// lambda(kappa, 4; q) for every kappa <= caps, by the recurrence
/// a(kappa,4) = rhs(kappa) - sum_{kappa' < kappa} q^{|kappa|-r+5} (q-1)^r
/// sigma(lambda(kappa',4)) inverted through the dominance principle, where r
/// counts the coordinates where kappa' differs from kappa.  Verifies the
/// functional equation of the assembly, the antisymmetry of every recurrence
/// right-hand side, the strict dominance gap, and the structural shape of
/// every value.
inline std::map<std::vector<int>, WeilElement> lambda_l4_table(const std::vector<int>& caps) {
  SeriesSpec spec;
  spec.nvars = static_cast<int>(caps.size());
  spec.caps = caps;
  A4Assembly asm4 = assemble_A4(spec);
  if (!a4_functional_equation_holds(asm4.gamma_times_a4))
    throw std::logic_error("fourth-moment assembly violates its functional equation");
  const WeilElement qm1 = w_qpow(1) - WeilElement(1);
  std::map<std::vector<int>, WeilElement> lam;
  // process kappa in increasing total weight so predecessors are ready
  std::vector<std::vector<int>> order;
  for_each_tuple(caps, [&](const std::vector<int>& e) { order.push_back(e); });
  std::sort(order.begin(), order.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    int wa = 0, wb = 0;
    for (int x : a) wa += x;
    for (int x : b) wb += x;
    return std::tie(wa, a) < std::tie(wb, b);
  });
  for (const std::vector<int>& e : order) {
    int w = 0;
    for (int x : e) w += x;
    WeilElement rhs = asm4.a4.coeff(e);
    for_each_tuple(e, [&](const std::vector<int>& ep) {
      if (ep == e) return;
      int wp = 0, diff = 0;
      for (size_t i = 0; i < e.size(); ++i) {
        wp += ep[i];
        if (ep[i] != e[i]) ++diff;
      }
      WeilElement coef = w_qpow(w - diff + 5);
      for (int i = 0; i < diff; ++i) coef *= qm1;
      rhs += coef * lam.at(ep).sigma();
    });
    if (rhs != -(w_qpow(w + 5) * rhs.sigma()))
      throw std::logic_error("fourth-moment recurrence right-hand side is not antisymmetric");
    WeilElement v = rhs.dominant_part(w + 5, /*forbid_boundary=*/true);
    check_lambda4_shape(Kappa(e.begin(), e.end()), v);
    lam[e] = v;
  }
  return lam;
}

/// lambda(kappa, 4; q) for a single kappa.
inline WeilElement lambda_l4(const Kappa& kappa) {
  Kappa k = kappa_sorted(kappa);
  if (k.empty()) return w_qpow(4);
  auto table = lambda_l4_table(k);
  return table.at(k);
}

// ---------------------------------------------------------- LambdaTable -----

/// Precomputed table of lambda(kappa, l; q) for all kappa <= caps and
/// l <= lmax (lmax at most 4), keyed by the canonical sorted kappa.
class LambdaTable {
 public:
  LambdaTable(int r, std::vector<int> caps, int lmax = 4) : r_(r), lmax_(lmax) {
    if (static_cast<int>(caps.size()) != r) throw std::invalid_argument("LambdaTable: caps/r mismatch");
    if (lmax < 0 || lmax > 4) throw std::invalid_argument("LambdaTable: lmax must be <= 4");
    std::sort(caps.begin(), caps.end(), std::greater<int>());
    caps_ = caps;
    std::map<std::vector<int>, WeilElement> l4;
    if (lmax_ >= 4) l4 = lambda_l4_table(caps_);
    for_each_tuple(caps_, [&](const std::vector<int>& e) {
      Kappa k = kappa_sorted(Kappa(e.begin(), e.end()));
      for (int l = 0; l <= lmax_; ++l) {
        auto key = std::make_pair(k, l);
        if (t_.count(key)) continue;
        WeilElement v;
        if (l <= 3) {
          v = lambda_weil(k, l);
        } else {
          std::vector<int> rep = k;
          rep.resize(caps_.size(), 0);
          v = l4.at(rep);
        }
        t_.emplace(std::move(key), std::move(v));
      }
    });
  }

  int r() const { return r_; }
  int lmax() const { return lmax_; }
  const std::vector<int>& caps() const { return caps_; }

  /// lambda(kappa, l; q); kappa is sorted internally (lambda is symmetric).
  const WeilElement& value(const Kappa& kappa, int l) const {
    auto it = t_.find({kappa_sorted(kappa), l});
    if (it == t_.end()) throw std::out_of_range("LambdaTable: entry not tabulated");
    return it->second;
  }

  const std::map<std::pair<Kappa, int>, WeilElement>& entries() const { return t_; }

 private:
  int r_, lmax_;
  std::vector<int> caps_;
  std::map<std::pair<Kappa, int>, WeilElement> t_;
};

// ----------------------------------------------- rational-function oracle ---

/// The moment multiple Dirichlet series for r <= 3 as an explicit rational
/// function N / prod (1 - q^{a} T^{e}) in t_1..t_{r+1}.
struct RationalFunctionData {
  int nvars = 0;
  /// numerator terms (coefficient, q-exponent, t-exponents)
  std::vector<std::tuple<long, int, std::vector<int>>> num;
  /// denominator factors 1 - q^{a} T^{e} as (a, e)
  std::vector<std::pair<int, std::vector<int>>> den;
};

/// FNV-1a 64-bit hash, used to pin the shipped r=3 data file.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : data) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

#ifndef QMDS_DATA_DIR
#define QMDS_DATA_DIR "data"
#endif

/// Load the r=3 rational function from its data file, recomputing and
/// checking the embedded FNV-1a hash of the payload.  Throws
/// std::runtime_error on a missing file or a checksum mismatch.
inline RationalFunctionData load_rational_r3(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rational-function data file: " + path);
  std::string line, expected_hash;
  std::getline(in, line);  // title comment
  std::getline(in, line);  // "# fnv1a64 <hex>"
  {
    std::istringstream ls(line);
    std::string hashmark, tag;
    ls >> hashmark >> tag >> expected_hash;
    if (hashmark != "#" || tag != "fnv1a64" || expected_hash.empty())
      throw std::runtime_error("malformed hash line in " + path);
  }
  std::ostringstream payload;
  payload << in.rdbuf();
  std::ostringstream got;
  got << std::hex << std::setfill('0') << std::setw(16) << fnv1a64(payload.str());
  if (got.str() != expected_hash)
    throw std::runtime_error("rational-function data file checksum mismatch: expected " +
                             expected_hash + ", got " + got.str());
  std::istringstream body(payload.str());
  RationalFunctionData d;
  std::string kw;
  size_t count = 0;
  body >> kw >> d.nvars;
  if (kw != "vars") throw std::runtime_error("malformed data file: " + path);
  body >> kw >> count;
  if (kw != "numerator") throw std::runtime_error("malformed data file: " + path);
  for (size_t i = 0; i < count; ++i) {
    long c;
    int qe;
    std::vector<int> e(d.nvars);
    body >> c >> qe;
    for (int& x : e) body >> x;
    d.num.emplace_back(c, qe, e);
  }
  body >> kw >> count;
  if (kw != "denominator") throw std::runtime_error("malformed data file: " + path);
  for (size_t i = 0; i < count; ++i) {
    int qe;
    std::vector<int> e(d.nvars);
    body >> qe;
    for (int& x : e) body >> x;
    d.den.emplace_back(qe, e);
  }
  if (!body) throw std::runtime_error("truncated data file: " + path);
  return d;
}

/// The explicit rational function for r in {1, 2, 3}; r = 3 is loaded (once)
/// from the shipped data file.
inline const RationalFunctionData& moment_rational_function(int r) {
  static const RationalFunctionData r1 = [] {
    RationalFunctionData d;
    d.nvars = 2;
    d.num = {{1, 0, {0, 0}}, {-1, 2, {1, 1}}};
    d.den = {{1, {1, 0}}, {1, {0, 1}}, {3, {2, 2}}};
    return d;
  }();
  static const RationalFunctionData r2 = [] {
    RationalFunctionData d;
    d.nvars = 3;
    d.num = {{1, 0, {0, 0, 0}}, {-1, 2, {1, 0, 1}}, {-1, 2, {0, 1, 1}}, {1, 3, {1, 1, 1}},
             {1, 3, {1, 1, 2}}, {-1, 4, {2, 1, 2}}, {-1, 4, {1, 2, 2}}, {1, 6, {2, 2, 3}}};
    d.den = {{1, {1, 0, 0}}, {1, {0, 1, 0}}, {1, {0, 0, 1}},
             {3, {2, 0, 2}}, {3, {0, 2, 2}}, {4, {2, 2, 2}}};
    return d;
  }();
  static const RationalFunctionData r3 =
      load_rational_r3(std::string(QMDS_DATA_DIR) + "/mds_rational_r3.dat");
  switch (r) {
    case 1:
      return r1;
    case 2:
      return r2;
    case 3:
      return r3;
    default:
      throw std::invalid_argument("moment_rational_function: r must be 1, 2 or 3");
  }
}

/// Expand the r-variable rational function as a power series in
/// t_1..t_{r+1} with Laurent-in-q coefficients, truncated by `spec`
/// (spec.nvars must be r + 1).
inline Series<LaurentQ> oracle_rational_function(int r, const SeriesSpec& spec) {
  const RationalFunctionData& d = moment_rational_function(r);
  if (spec.nvars != d.nvars)
    throw std::invalid_argument("oracle_rational_function: spec must have r + 1 variables");
  Series<LaurentQ> ser(spec);
  for (auto& [c, qe, e] : d.num)
    if (spec.admits(e)) ser.add_coeff(e, LaurentQ::monomial(Rat(c), 2 * qe));
  for (auto& [qe, e] : d.den) {
    Series<LaurentQ> g(spec);
    std::vector<int> mono(d.nvars, 0);
    for (int k = 0;; ++k) {
      for (int i = 0; i < d.nvars; ++i) mono[i] = k * e[i];
      if (!spec.admits(mono)) break;
      g.set_coeff(mono, LaurentQ::monomial(Rat(1), 2 * k * qe));
    }
    ser *= g;
  }
  return ser;
}

/// Convenience accessor: lambda(kappa, l; q) read off the r <= 3 oracle.
inline LaurentQ oracle_lambda(int r, const Kappa& kappa, int l, const SeriesSpec& spec) {
  if (static_cast<int>(kappa.size()) != r)
    throw std::invalid_argument("oracle_lambda: kappa must have r parts");
  std::vector<int> e(kappa.begin(), kappa.end());
  e.push_back(l);
  return oracle_rational_function(r, spec).coeff(e);
}

// --------------------------------------------------------- brute force ------

/// Factor a monic polynomial into (irreducible, multiplicity) pairs using the
/// shared irreducible tables.
inline std::vector<std::pair<Poly, int>> factor_monic(const Poly& m) {
  std::vector<std::pair<Poly, int>> out;
  const FiniteField& base = m.field();
  Poly rem = m;
  for (int deg = 1; rem.degree() > 0; ++deg) {
    if (deg > rem.degree()) throw std::logic_error("factor_monic: ran past degree");
    for (const Poly& P : IrreducibleCache::get(base, deg)) {
      if (rem.degree() < deg) break;
      int mult = 0;
      while (rem.mod(P).is_zero()) {
        ++mult;
        std::vector<long> rv = rem.coeffs(), qv(rem.degree() - deg + 1, 0);
        while (static_cast<int>(rv.size()) - 1 >= deg) {
          long fac = base.mul(rv.back(), base.inv(P.leading()));
          size_t off = rv.size() - 1 - deg;
          qv[off] = fac;
          for (int i = 0; i <= deg; ++i) rv[off + i] = base.sub(rv[off + i], base.mul(fac, P.coeff(i)));
          while (!rv.empty() && rv.back() == 0) rv.pop_back();
        }
        rem = Poly(base, std::move(qv));
      }
      if (mult) out.emplace_back(P, mult);
    }
  }
  return out;
}

/// Quadratic-residue symbol (d / P) for irreducible P not dividing d,
/// evaluated through the quadratic character at a root of P.
inline int residue_symbol(const Poly& d, const Poly& P) {
  const FiniteField& base = d.field();
  const FiniteField& big = FieldRegistry::get(base.p(), base.e() * P.degree());
  const Embedding& emb = get_embedding(base, big);
  for (long t = 0; t < big.q(); ++t)
    if (P.eval_embedded(emb, t) == 0) return big.quadratic_char(d.eval_embedded(emb, t));
  throw std::logic_error("residue_symbol: irreducible with no root in its splitting field");
}

/// lambda(kappa, l; q0) computed directly from the defining Dirichlet-series
/// identity: the sum over all monic tuples (m_1..m_r, d) with deg m_i =
/// kappa_i, deg d = l of chi_{d0}(m_i-coprime-part) times the multiplicative
/// prime sum a(m, d), where d0 is the square-free kernel of d and
/// a(pi^kappa, pi^l) = |pi|^{|kappa|+l} lambda(kappa, l; 1/|pi|).  Exact in
/// rational arithmetic; l <= 3 so the prime-local values stay in the proven
/// closed forms.
inline Rat brute_force_lambda(const Kappa& kappa, int l, long q0) {
  if (l < 0 || l > 3) throw std::invalid_argument("brute_force_lambda: l must be <= 3");
  auto [p, e] = prime_power_split(q0);
  const FiniteField& f = FieldRegistry::get(p, e);
  const int r = static_cast<int>(kappa.size());

  auto hecke_at_inverse = [](long npi) {
    return [npi](int sym) { return HeckeTable::instance().inverse_convention(npi, 2 * sym); };
  };

  long dcount = 1;
  for (int i = 0; i < l; ++i) dcount *= q0;
  std::vector<long> mcount(r);
  for (int i = 0; i < r; ++i) {
    mcount[i] = 1;
    for (int j = 0; j < kappa[i]; ++j) mcount[i] *= q0;
  }

  Rat total = 0;
  for (long dc = 0; dc < dcount; ++dc) {
    Poly d = Poly::monic_from_code(f, l, dc);
    auto fd = factor_monic(d);
    Poly d0 = Poly::constant(f, 1);
    for (auto& [pi, mult] : fd)
      if (mult % 2) d0 = d0 * pi;
    // iterate over tuples of monic m_i
    std::vector<long> mc(r, 0);
    while (true) {
      std::vector<std::vector<std::pair<Poly, int>>> fms(r);
      long chi = 1;
      for (int i = 0; i < r; ++i) {
        fms[i] = factor_monic(Poly::monic_from_code(f, kappa[i], mc[i]));
        for (auto& [pi, mult] : fms[i]) {
          if (d0.mod(pi).is_zero()) continue;  // hat: skip primes dividing d0
          int s = residue_symbol(d0, pi);
          if (mult % 2 && s == -1) chi = -chi;
          if (s == 0) throw std::logic_error("residue symbol vanished on a coprime prime");
        }
      }
      // union of primes, keyed by coefficient vector
      std::map<std::vector<long>, Poly> primes;
      for (auto& [pi, mult] : fd) primes.emplace(pi.coeffs(), pi);
      for (auto& fm : fms)
        for (auto& [pi, mult] : fm) primes.emplace(pi.coeffs(), pi);
      Rat a(1);
      for (auto& [key, pi] : primes) {
        Kappa kap;
        for (auto& fm : fms) {
          int mult = 0;
          for (auto& [pj, mj] : fm)
            if (pj.coeffs() == key) mult = mj;
          kap.push_back(mult);
        }
        int lp = 0;
        for (auto& [pj, mj] : fd)
          if (pj.coeffs() == key) lp = mj;
        long npi = 1;
        for (int i = 0; i < pi.degree(); ++i) npi *= q0;
        Rat scale = 1;
        for (int i = 0; i < kappa_weight(kap) + lp; ++i) scale *= Rat(npi);
        a *= scale * lambda_weil(kap, lp).eval(Rat(1, npi), hecke_at_inverse(npi));
      }
      total += Rat(chi) * a;
      int i = 0;
      for (; i < r; ++i) {
        if (++mc[i] < mcount[i]) break;
        mc[i] = 0;
      }
      if (i == r) break;
    }
  }
  return total;
}

// ------------------------------------------------- functional equations -----

/// Outcome of the exact functional-equation verification.
struct FunctionalEquationReport {
  bool ok = true;
  long points_checked = 0;   ///< rational sample points for the two reflections
  long points_skipped = 0;   ///< points discarded because a denominator vanished
  long coeffs_checked = 0;   ///< series coefficients in the prime-part checks
  std::string first_failure; ///< empty when ok
};

namespace detail {

inline Rat rat_pow(const Rat& b, long e) {
  Rat r(1), base = b;
  bool inv = e < 0;
  if (inv) e = -e;
  for (; e; e >>= 1) {
    if (e & 1) r *= base;
    base *= base;
  }
  if (inv) {
    if (r == 0) throw std::domain_error("rat_pow: zero to a negative power");
    r = Rat(1) / r;
  }
  return r;
}

/// Evaluate N / D at a rational point; nullopt when a denominator factor
/// vanishes.
inline std::optional<Rat> eval_rational(const RationalFunctionData& d, const Rat& q,
                                        const std::vector<Rat>& t) {
  Rat num = 0;
  for (auto& [c, qe, e] : d.num) {
    Rat term = Rat(c) * rat_pow(q, qe);
    for (int i = 0; i < d.nvars; ++i) term *= rat_pow(t[i], e[i]);
    num += term;
  }
  Rat den = 1;
  for (auto& [qe, e] : d.den) {
    Rat fac = rat_pow(q, qe);
    for (int i = 0; i < d.nvars; ++i) fac *= rat_pow(t[i], e[i]);
    fac = Rat(1) - fac;
    if (fac == 0) return std::nullopt;
    den *= fac;
  }
  return num / den;
}

}  // namespace detail

/// Exact verification of the two reflection functional equations and the
/// prime-part interpolation for r in {1, 2, 3}.
///
/// The two reflections (t_i -> 1/(q t_i) combined with t_{r+1} -> sqrt(q) t_i
/// t_{r+1}, and t_{r+1} -> 1/(q t_{r+1}) combined with t_j -> sqrt(q) t_{r+1}
/// t_j) are checked by exact rational evaluation of both sides on a
/// deterministic grid with caps_j + 1 sample values in variable j; once the
/// grid exceeds the cleared-denominator degrees this constitutes a complete
/// proof of the identity.  q0 must be an odd perfect square so that sqrt(q0)
/// is rational.
///
/// The prime part P(T, t; q) = Z(qT, qt; 1/q) is expanded symbolically (in q)
/// to the caps and checked against its characterizing properties: the
/// normalization P(0) = 1, polynomiality and palindromy of the gamma-factored
/// slices in each t_i and in t_{r+1}, and evenness in T of the odd slices.
inline FunctionalEquationReport functional_equations_r_le_3(int r, long q0,
                                                            const std::vector<int>& caps) {
  if (r < 1 || r > 3) throw std::invalid_argument("functional_equations_r_le_3: r must be 1..3");
  if (static_cast<int>(caps.size()) != r + 1)
    throw std::invalid_argument("functional_equations_r_le_3: caps must have r + 1 entries");
  long s0 = std::lround(std::sqrt(static_cast<double>(q0)));
  while (s0 * s0 > q0) --s0;
  while ((s0 + 1) * (s0 + 1) <= q0) ++s0;
  if (s0 * s0 != q0 || q0 % 2 == 0 || q0 < 9)
    throw std::invalid_argument(
        "functional_equations_r_le_3: q0 must be an odd perfect square >= 9 so that sqrt(q) is "
        "rational");
  const RationalFunctionData& data = moment_rational_function(r);
  const int n = r + 1;
  const Rat q(q0), s(s0);
  FunctionalEquationReport rep;
  auto fail = [&](const std::string& msg) {
    if (rep.ok) {
      rep.ok = false;
      rep.first_failure = msg;
    }
  };
  auto point_str = [](const std::vector<Rat>& t) {
    std::string out = "(";
    for (size_t i = 0; i < t.size(); ++i) out += (i ? ", " : "") + t[i].get_str();
    return out + ")";
  };

  // ---- reflection checks on the rational sample grid ----
  std::vector<int> grid(caps.begin(), caps.end());
  for_each_tuple(grid, [&](const std::vector<int>& idx) {
    if (!rep.ok) return;
    std::vector<Rat> t(n);
    for (int i = 0; i < n; ++i) t[i] = Rat(idx[i] + 2, 2 * idx[i] + 3);
    auto z = detail::eval_rational(data, q, t);
    if (!z) {
      ++rep.points_skipped;
      return;
    }
    bool used = false;
    // reflection in t_i, i <= r
    for (int i = 0; i < r; ++i) {
      std::vector<Rat> tp = t, tm = t;
      tp[i] = Rat(1) / (q * t[i]);
      tm[i] = tp[i];
      tp[n - 1] = s * t[i] * t[n - 1];
      tm[n - 1] = -tp[n - 1];
      auto zp = detail::eval_rational(data, q, tp);
      auto zm = detail::eval_rational(data, q, tm);
      if (!zp || !zm) {
        ++rep.points_skipped;
        continue;
      }
      used = true;
      Rat rhs = (*zp - *zm) / (2 * s * t[i]) -
                (Rat(1) - t[i]) / (t[i] * (Rat(1) - q * t[i])) * (*zp + *zm) / 2;
      if (*z != rhs)
        fail("t_" + std::to_string(i + 1) + " reflection fails at " + point_str(t));
    }
    // reflection in t_{r+1}
    {
      std::vector<Rat> tp(n), tm(n);
      for (int j = 0; j < r; ++j) {
        tp[j] = s * t[n - 1] * t[j];
        tm[j] = -tp[j];
      }
      tp[n - 1] = tm[n - 1] = Rat(1) / (q * t[n - 1]);
      auto zp = detail::eval_rational(data, q, tp);
      auto zm = detail::eval_rational(data, q, tm);
      if (zp && zm) {
        used = true;
        Rat rhs = (*zp - *zm) / (2 * s * t[n - 1]) -
                  (Rat(1) - t[n - 1]) / (t[n - 1] * (Rat(1) - q * t[n - 1])) * (*zp + *zm) / 2;
        if (*z != rhs) fail("t_{r+1} reflection fails at " + point_str(t));
      } else {
        ++rep.points_skipped;
      }
    }
    if (used) ++rep.points_checked;
  });

  // ---- prime-part interpolation, symbolic in q ----
  SeriesSpec spec;
  spec.nvars = n;
  spec.caps = caps;
  Series<LaurentQ> P = oracle_rational_function(r, spec)
                           .map_coeffs<LaurentQ>([](const LaurentQ& c) { return c.invert_q(); });
  for (int i = 0; i < n; ++i) P = P.scale_variable(i, LaurentQ::q_pow(1));

  if (P.constant_term() != LaurentQ::q_pow(0)) fail("prime part is not normalized to 1 at 0");
  ++rep.coeffs_checked;

  // One t_{r+1}-degree slice of P as a series in t_1..t_r.
  SeriesSpec subspec;
  subspec.nvars = r;
  subspec.caps = std::vector<int>(caps.begin(), caps.end() - 1);
  auto slice_last = [&](int l) {
    Series<LaurentQ> out(subspec);
    for (auto& [ex, c] : P.terms())
      if (ex[n - 1] == l) out.set_coeff(std::vector<int>(ex.begin(), ex.end() - 1), c);
    return out;
  };

  // palindromy of a polynomial family: coeff(2h - a, rest) = q^{h-a} coeff(a, rest)
  auto check_palindrome = [&](const Series<LaurentQ>& poly, int var, int h,
                              const std::string& what) {
    std::set<std::vector<int>> seen;
    for (auto& [ex, c] : poly.terms()) {
      std::vector<int> key = ex;
      key[var] = std::min(ex[var], 2 * h - ex[var]);
      if (key[var] < 0) key[var] = ex[var];  // beyond-degree term, checked directly
      if (!seen.insert(key).second) continue;
      int a = key[var];
      std::vector<int> mirror = key;
      mirror[var] = 2 * h - a;
      LaurentQ lo = poly.coeff(key);
      LaurentQ hi = (mirror[var] >= 0 && poly.spec().admits(mirror)) ? poly.coeff(mirror)
                                                                     : LaurentQ();
      if (mirror[var] >= 0 && !poly.spec().admits(mirror)) continue;  // partner truncated away
      if (hi != lo * LaurentQ::q_pow(h - a))
        fail(what + ": palindromy fails at exponent " + std::to_string(ex[var]));
      ++rep.coeffs_checked;
    }
  };

  // gamma-factored slices in t_{r+1}
  Series<LaurentQ> gammaT = Series<LaurentQ>::one(subspec);
  for (int i = 0; i < r; ++i) {
    Series<LaurentQ> lin = Series<LaurentQ>::one(subspec);
    std::vector<int> e(r, 0);
    e[i] = 1;
    if (subspec.admits(e)) lin.set_coeff(e, LaurentQ::monomial(Rat(-1), 0));
    gammaT *= lin;
  }
  for (int l = 0; l <= caps[n - 1]; ++l) {
    Series<LaurentQ> Pl = slice_last(l);
    if (l % 2 == 0) Pl *= gammaT;
    if (l % 2 == 1) {
      // odd slices are even in T
      for (auto& [ex, c] : Pl.terms()) {
        int tot = 0;
        for (int j = 0; j < r; ++j) tot += ex[j];
        if (tot % 2) fail("odd slice l = " + std::to_string(l) + " is not even in T");
        ++rep.coeffs_checked;
      }
    }
    int h = l / 2;
    if (2 * h <= caps[0]) check_palindrome(Pl, 0, h, "slice l = " + std::to_string(l));
  }

  // gamma-factored slices in T^kappa, palindromic in t_{r+1}
  {
    SeriesSpec lastspec;
    lastspec.nvars = 1;
    lastspec.caps = {caps[n - 1]};
    std::map<std::vector<int>, Series<LaurentQ>> qslice;
    for (auto& [ex, c] : P.terms()) {
      std::vector<int> kap(ex.begin(), ex.end() - 1);
      auto it = qslice.find(kap);
      if (it == qslice.end()) it = qslice.emplace(kap, Series<LaurentQ>(lastspec)).first;
      it->second.set_coeff({ex[n - 1]}, c);
    }
    Series<LaurentQ> lin = Series<LaurentQ>::one(lastspec);
    if (lastspec.admits({1})) lin.set_coeff({1}, LaurentQ::monomial(Rat(-1), 0));
    for (auto& [kap, sl] : qslice) {
      int w = 0;
      for (int x : kap) w += x;
      Series<LaurentQ> Qk = (w % 2 == 0) ? sl * lin : sl;
      int h = w / 2;
      if (2 * h <= caps[n - 1]) {
        std::string what = "slice at kappa of weight " + std::to_string(w);
        check_palindrome(Qk, 0, h, what);
      }
    }
  }

  return rep;
}

}  // namespace qmds
