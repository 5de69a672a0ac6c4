/**
 * @file curves.hpp
 * @brief Invariants of the hyperelliptic curve y^2 = d(x) for square-free d:
 *        Frobenius trace sums a_j, the zeta numerator P(t), Dirichlet
 *        L-functions, and the split data (a*_m, c_m) over Galois orbits.
 */
#pragma once

#include <cassert>

#include "qmds/polyspace.hpp"
#include "qmds/series.hpp"

namespace qmds {

/// chi_j(x) for x in F_{q^j}, where chi is the quadratic character of F_q
/// composed with the norm: equivalently the quadratic character of F_{q^j}.
/// a_j(C_d) = -[deg d even]*chi_j(lead d) - sum_{theta in F_{q^j}} chi_j(d(theta)).
/// For monic d the first term is the (1 + (-1)^{deg d})/2 convention; keeping
/// the character of the leading coefficient makes non-monic d work as well.
inline long trace_sum(const Poly& d, int j) {
  const FiniteField& base = d.field();
  long qj = 1;
  for (int i = 0; i < j * base.e(); ++i) {
    qj *= base.p();
    if (qj > kFieldOrderCap) throw std::overflow_error("trace_sum: q^j exceeds cap");
  }
  const FiniteField& big = FieldRegistry::get(base.p(), base.e() * j);
  const Embedding& emb = get_embedding(base, big);
  long s = 0;
  for (long theta = 0; theta < big.q(); ++theta) s += big.quadratic_char(d.eval_embedded(emb, theta));
  long boundary = (d.degree() % 2 == 0) ? big.quadratic_char(emb(d.leading())) : 0;
  return -boundary - s;
}

inline std::vector<long> trace_sums(const Poly& d, int jmax) {
  if (!is_squarefree(d)) throw std::invalid_argument("trace_sums: d must be square-free");
  std::vector<long> a(jmax);
  for (int j = 1; j <= jmax; ++j) a[j - 1] = trace_sum(d, j);
  return a;
}

inline int genus_of(const Poly& d) {
  return std::max(0, (d.degree() + 1) / 2 - 1);
}

/// Zeta numerator P(t) = det(1 - F* t | H^1) as integer coefficients
/// c_0..c_{2g}: c_0 = 1, c_k from Newton's identities on a_1..a_g, and
/// c_{2g-k} = q^{g-k} c_k by the functional equation.
inline std::vector<Int> zeta_numerator(const Poly& d) {
  if (!is_squarefree(d)) throw std::invalid_argument("zeta_numerator: d must be square-free");
  int g = genus_of(d);
  std::vector<Int> c(2 * g + 1, 0);
  c[0] = 1;
  if (g == 0) return c;
  std::vector<long> a = trace_sums(d, g);
  // e_k of the Frobenius eigenvalues via Newton: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} a_i.
  std::vector<Rat> e(g + 1);
  e[0] = 1;
  for (int k = 1; k <= g; ++k) {
    Rat acc = 0;
    for (int i = 1; i <= k; ++i) {
      Rat term = e[k - i] * Rat(a[i - 1]);
      acc += (i % 2 == 1) ? term : -term;
    }
    e[k] = acc / k;
    if (e[k].get_den() != 1) throw std::logic_error("zeta_numerator: non-integral e_k");
  }
  for (int k = 1; k <= g; ++k) c[k] = (k % 2 == 0 ? 1 : -1) * e[k].get_num();
  Int qq = d.field().q();
  for (int k = g + 1; k <= 2 * g; ++k) {
    Int f = 1;
    for (int i = 0; i < k - g; ++i) f *= qq;
    c[k] = f * c[2 * g - k];
  }
  return c;
}

/// Jacobi-type character chi_d(m) = (d/m) for monic m, computed through the
/// factorization of m: for irreducible P, (d/P) is the quadratic character of
/// the residue of d at a root of P; extended multiplicatively.
inline int chi_d(const Poly& d, const Poly& m) {
  const FiniteField& base = d.field();
  if (m.degree() == 0) return 1;
  int result = 1;
  Poly rem = m;
  for (int deg = 1; rem.degree() > 0; ++deg) {
    if (deg > rem.degree()) throw std::logic_error("chi_d: factoring ran past degree");
    for (const Poly& P : IrreducibleCache::get(base, deg)) {
      if (rem.degree() < deg) break;
      while (rem.mod(P).is_zero()) {
        // (d/P): find the smallest root of P in F_{q^deg} and evaluate.
        const FiniteField& big = FieldRegistry::get(base.p(), base.e() * deg);
        const Embedding& emb = get_embedding(base, big);
        long root = -1;
        for (long t = 0; t < big.q(); ++t)
          if (P.eval_embedded(emb, t) == 0) {
            root = t;
            break;
          }
        result *= big.quadratic_char(d.eval_embedded(emb, root));
        // divide rem by P
        Poly quotient(base);
        {
          std::vector<long> r = rem.coeffs(), qv(rem.degree() - deg + 1, 0);
          while (static_cast<int>(r.size()) - 1 >= deg) {
            long fac = base.mul(r.back(), base.inv(P.leading()));
            size_t off = r.size() - 1 - deg;
            qv[off] = fac;
            for (int i = 0; i <= deg; ++i)
              r[off + i] = base.sub(r[off + i], base.mul(fac, P.coeff(i)));
            while (!r.empty() && r.back() == 0) r.pop_back();
          }
          quotient = Poly(base, std::move(qv));
        }
        rem = quotient;
        if (result == 0) return 0;
      }
    }
  }
  return result;
}

/// L(s, chi_d) as a polynomial in u = q^{-s}: coefficient of u^i is
/// sum over monic m of degree i of chi_d(m).  Degree deg d - 1.
inline std::vector<long> l_function(const Poly& d) {
  if (d.degree() < 1) throw std::invalid_argument("l_function: need deg d >= 1");
  const FiniteField& f = d.field();
  std::vector<long> L(d.degree(), 0);
  L[0] = 1;
  for (int i = 1; i < d.degree(); ++i) {
    long total = 1;
    for (int k = 0; k < i; ++k) total *= f.q();
    long s = 0;
    for (long code = 0; code < total; ++code) s += chi_d(d, Poly::monic_from_code(f, i, code));
    L[i] = s;
  }
  return L;
}

/// Split data: a*_m = sum over exact-degree-m theta of chi_m(d(theta)),
/// c_m = the same sum of chi_m(d(theta))^2.
struct SplitData {
  std::map<int, long> astar;
  std::map<int, long> csum;
};

inline SplitData split_data(const Poly& d, int mmax) {
  if (!is_squarefree(d)) throw std::invalid_argument("split_data: d must be square-free");
  const FiniteField& base = d.field();
  SplitData out;
  for (int m = 1; m <= mmax; ++m) {
    const FiniteField& big = FieldRegistry::get(base.p(), base.e() * m);
    const Embedding& emb = get_embedding(base, big);
    long as = 0, cs = 0;
    for (long theta : big.elements_of_exact_degree(m, base.e())) {
      int ch = big.quadratic_char(d.eval_embedded(emb, theta));
      as += ch;
      cs += ch * ch;
    }
    out.astar[m] = as;
    out.csum[m] = cs;
  }
  return out;
}

/// The series prod_k P_{C_d}(t_k) over the given contract (exact, since P is
/// a polynomial).
inline Series<Rat> char_poly_series(const Poly& d, const SeriesSpec& spec) {
  std::vector<Int> P = zeta_numerator(d);
  Series<Rat> acc = Series<Rat>::one(spec);
  for (int k = 0; k < spec.nvars; ++k) {
    Series<Rat> fk(spec);
    for (size_t i = 0; i < P.size(); ++i) {
      Series<Rat>::Exp e(spec.nvars, 0);
      e[k] = static_cast<int>(i);
      fk.add_coeff(e, Rat(P[i]));
    }
    acc *= fk;
  }
  return acc;
}

/// Infinite-product form of prod_k P_{C_d}(t_k) from the split data:
/// (1-t)^{-eps} prod_m (1-t^m)^{-(c_m+a*_m)/2m} (1+t^m)^{-(c_m-a*_m)/2m},
/// truncated per the contract; asserts the exponents are integers.
inline Series<Rat> char_poly_product_form(const Poly& d, const SeriesSpec& spec) {
  int mmax = 0;
  for (int c : spec.caps) mmax = std::max(mmax, c);
  SplitData sd = split_data(d, mmax);
  int eps = (d.degree() % 2 == 0) ? 1 : 0;
  Series<Rat> acc = Series<Rat>::one(spec);
  for (int k = 0; k < spec.nvars; ++k) {
    // per-variable factor, truncated at the variable cap
    int cap = spec.caps[k];
    SeriesSpec uni = SeriesSpec::uniform(1, cap);
    Series<Rat> fac = Series<Rat>::one(uni);
    auto geom = [&](int m, int sign) {
      // (1 - sign*t^m) as a univariate polynomial
      Series<Rat> s = Series<Rat>::one(uni);
      Series<Rat>::Exp e(1, m);
      s.add_coeff(e, Rat(-sign));
      return s;
    };
    if (eps) fac *= geom(1, 1).inverse();
    for (int m = 1; m <= cap; ++m) {
      long plus = sd.csum[m] + sd.astar[m], minus = sd.csum[m] - sd.astar[m];
      if (plus % (2 * m) != 0 || minus % (2 * m) != 0)
        throw std::logic_error("char_poly_product_form: non-integral exponent");
      long ep = plus / (2 * m), em = minus / (2 * m);
      for (long i = 0; i < ep; ++i) fac *= geom(m, 1).inverse();
      for (long i = 0; i < em; ++i) fac *= geom(m, -1).inverse();
    }
    // embed the univariate factor into variable k
    Series<Rat> fk(spec);
    for (auto& [e, c] : fac.terms()) {
      Series<Rat>::Exp ee(spec.nvars, 0);
      ee[k] = e[0];
      fk.add_coeff(ee, c);
    }
    acc *= fk;
  }
  return acc;
}

}  // namespace qmds
