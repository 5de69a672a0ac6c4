#pragma once
/**
 * @file compose.hpp
 * @brief Compositional-inverse identities: the split-case triple, the
 *        genus-zero (Getzler) inversion, and a small plethysm engine.
 *
 * Three related pieces of machinery live here.  First, the generating triple
 * c(x,y,z;T,q) built from the fully-split square-free strata, together with
 * an exact verification that applying the triple built from (qT, 1/q) on the
 * outside recovers the identity (x, y, z).  The outside triple is obtained by
 * interpolating each A_{n,i,j} coefficient into the Weil ring from samples at
 * many primes and applying the q -> 1/q involution there.  Second, the
 * compositional inversion of f(x) = (1 + q^2 x - (1+x)^q)/(q(q-1)), whose
 * inverse's coefficients count stable genus-zero pointed curves.  Third, a
 * truncated plethystic ring with Adams operations psi^n, the involutions iota
 * and delta, and the fixed-point series S(Z;q) of the square-free counting
 * element, all over exact rational functions in q.
 */

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qmds/curves.hpp"
#include "qmds/ffield.hpp"
#include "qmds/laurent.hpp"
#include "qmds/moments.hpp"
#include "qmds/polyspace.hpp"
#include "qmds/qrat.hpp"
#include "qmds/rational.hpp"
#include "qmds/series.hpp"
#include "qmds/symfun.hpp"
#include "qmds/weil.hpp"

namespace qmds {

// ---------------------------------------------------------------------------
// Genus-zero inversion
// ---------------------------------------------------------------------------

/// f and its compositional inverse g as truncated univariate series over
/// exact rational functions in q; index n holds the coefficient of x^n.
struct GetzlerPair {
  int degree = 0;
  std::vector<QRat> f;  ///< f(x) = (1 + q^2 x - (1+x)^q)/(q(q-1))
  std::vector<QRat> g;  ///< g = f^{-1}; n! g_n counts stable genus-0 (n+1)-pointed curves
};

namespace detail {

/// Truncated product of univariate series (vectors indexed by exponent).
inline std::vector<QRat> uni_mul(const std::vector<QRat>& a, const std::vector<QRat>& b,
                                 int D) {
  std::vector<QRat> r(D + 1, QRat(0));
  for (int i = 0; i <= D; ++i) {
    if (a[i] == QRat(0)) continue;
    for (int j = 0; i + j <= D; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

/// a(b(x)) truncated at degree D; requires b with zero constant term.
inline std::vector<QRat> uni_compose(const std::vector<QRat>& a, const std::vector<QRat>& b,
                                     int D) {
  if (!(b[0] == QRat(0))) throw std::invalid_argument("uni_compose: inner constant term");
  std::vector<QRat> r(D + 1, QRat(0)), p(D + 1, QRat(0));
  p[0] = QRat(1);
  r[0] = a[0];
  for (int k = 1; k <= D && k < static_cast<int>(a.size()); ++k) {
    p = uni_mul(p, b, D);
    for (int m = 0; m <= D; ++m) r[m] += a[k] * p[m];
  }
  return r;
}

/// The symbolic binomial coefficient C(q, n) as a polynomial in q.
inline QRat q_binom(int n) {
  QRat acc(1);
  Rat fact = 1;
  for (int k = 0; k < n; ++k) {
    acc *= QRat(LaurentQ::q_pow(1) - LaurentQ(static_cast<long>(k)));
    fact *= (k + 1);
  }
  return acc * QRat(Rat(1) / fact);
}

}  // namespace detail

/// Build f from its closed form and g by coefficient-wise inversion.
/// Internally asserts f(g) = g(f) = id and the functional equation
/// q^2 g(x, q) = q(q-1) x + g(qx, 1/q), all symbolically in q.
inline GetzlerPair getzler_pair(int D) {
  if (D < 1 || D > 14) throw std::invalid_argument("getzler_pair: degree must be in 1..14");
  GetzlerPair out;
  out.degree = D;
  // f_n = -C(q,n)/(q(q-1)) for n >= 2; the division is exact in Q[q].
  QRat qq1 = QRat(LaurentQ::q_pow(2) - LaurentQ::q_pow(1));
  out.f.assign(D + 1, QRat(0));
  out.f[1] = QRat(1);
  for (int n = 2; n <= D; ++n) {
    out.f[n] = -detail::q_binom(n) / qq1;
    if (!out.f[n].is_laurent())
      throw std::logic_error("getzler_pair: f_n is not a polynomial in q");
  }
  // Invert degree by degree: with g known below degree d, the x^d coefficient
  // of f(g) is g_d plus terms from lower g-coefficients.
  out.g.assign(D + 1, QRat(0));
  out.g[1] = QRat(1);
  for (int d = 2; d <= D; ++d) {
    std::vector<QRat> fg = detail::uni_compose(out.f, out.g, d);
    out.g[d] = -fg[d];
  }
  // Exact round-trip checks.
  std::vector<QRat> fg = detail::uni_compose(out.f, out.g, D);
  std::vector<QRat> gf = detail::uni_compose(out.g, out.f, D);
  for (int n = 0; n <= D; ++n) {
    QRat want = (n == 1) ? QRat(1) : QRat(0);
    if (!(fg[n] == want) || !(gf[n] == want))
      throw std::logic_error("getzler_pair: inversion round-trip failed");
  }
  // q^2 g_n(q) = q^n g_n(1/q) for n >= 2 (degree 1 is immediate).
  for (int n = 2; n <= D; ++n)
    if (!(QRat::q_pow(2) * out.g[n] == QRat::q_pow(n) * out.g[n].invert_q()))
      throw std::logic_error("getzler_pair: functional equation failed");
  return out;
}

// ---------------------------------------------------------------------------
// Plethystic engine
// ---------------------------------------------------------------------------

/// Truncated series in graded variables X_n, Y_n, Z_n, p_n (1 <= n <= D, each
/// of degree n) over exact rational functions in q.  Supports the Adams ring
/// endomorphisms psi^n (variable index and q-exponent multiplied by n), the
/// involution iota (swap Y_n <-> Z_n and negate p_n for odd n), and the
/// involution delta (q -> 1/q on coefficients times q^{degree}).
class PlethSeries {
 public:
  enum Bank { kX = 0, kY = 1, kZ = 2, kP = 3 };
  using Exp = std::vector<int>;  ///< length 4*D: [X_1..X_D, Y_1.., Z_1.., p_1..]

  explicit PlethSeries(int D) : d_(D) {
    if (D < 1) throw std::invalid_argument("PlethSeries: degree must be positive");
  }

  int degree() const { return d_; }
  const std::map<Exp, QRat>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  static PlethSeries one(int D) {
    PlethSeries s(D);
    s.t_.emplace(Exp(4 * D, 0), QRat(1));
    return s;
  }
  static PlethSeries variable(int D, Bank b, int n) {
    if (n < 1 || n > D) throw std::invalid_argument("PlethSeries: variable index out of range");
    PlethSeries s(D);
    Exp e(4 * D, 0);
    e[b * D + n - 1] = 1;
    s.t_.emplace(e, QRat(1));
    return s;
  }

  long weighted_degree(const Exp& e) const {
    long w = 0;
    for (int b = 0; b < 4; ++b)
      for (int n = 1; n <= d_; ++n) w += static_cast<long>(e[b * d_ + n - 1]) * n;
    return w;
  }

  QRat coeff(const Exp& e) const {
    auto it = t_.find(e);
    return it == t_.end() ? QRat(0) : it->second;
  }
  QRat constant_term() const { return coeff(Exp(4 * d_, 0)); }

  void add_coeff(const Exp& e, const QRat& c) {
    if (weighted_degree(e) > d_) return;
    auto it = t_.find(e);
    if (it == t_.end()) {
      if (!(c == QRat(0))) t_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == QRat(0)) t_.erase(it);
    }
  }

  friend PlethSeries operator+(const PlethSeries& a, const PlethSeries& b) {
    a.check(b);
    PlethSeries r = a;
    for (auto& [e, c] : b.t_) r.add_coeff(e, c);
    return r;
  }
  friend PlethSeries operator-(const PlethSeries& a, const PlethSeries& b) {
    a.check(b);
    PlethSeries r = a;
    for (auto& [e, c] : b.t_) r.add_coeff(e, -c);
    return r;
  }
  friend PlethSeries operator*(const PlethSeries& a, const PlethSeries& b) {
    a.check(b);
    PlethSeries r(a.d_);
    Exp e(4 * a.d_);
    for (auto& [ea, ca] : a.t_)
      for (auto& [eb, cb] : b.t_) {
        for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_coeff(e, ca * cb);
      }
    return r;
  }
  PlethSeries& operator+=(const PlethSeries& o) { return *this = *this + o; }
  PlethSeries& operator-=(const PlethSeries& o) { return *this = *this - o; }
  PlethSeries& operator*=(const PlethSeries& o) { return *this = *this * o; }
  friend bool operator==(const PlethSeries& a, const PlethSeries& b) {
    a.check(b);
    return a.t_ == b.t_;
  }
  friend bool operator!=(const PlethSeries& a, const PlethSeries& b) { return !(a == b); }

  PlethSeries scaled(const QRat& c) const {
    PlethSeries r(d_);
    for (auto& [e, v] : t_) r.add_coeff(e, v * c);
    return r;
  }

  /// Adams operation: variable index times n, q -> q^n on coefficients.
  PlethSeries psi(int n) const {
    if (n < 1) throw std::invalid_argument("PlethSeries::psi: n must be positive");
    PlethSeries r(d_);
    for (auto& [e, c] : t_) {
      Exp f(4 * d_, 0);
      bool keep = true;
      for (int b = 0; b < 4 && keep; ++b)
        for (int m = 1; m <= d_; ++m) {
          int x = e[b * d_ + m - 1];
          if (x == 0) continue;
          if (m * n > d_) {
            keep = false;  // the image monomial exceeds the truncation degree
            break;
          }
          f[b * d_ + m * n - 1] += x;
        }
      if (keep) r.add_coeff(f, c.subst_exponent(n));
    }
    return r;
  }

  /// Swap Y_n <-> Z_n and negate p_n for odd n; everything else fixed.
  PlethSeries iota() const {
    PlethSeries r(d_);
    for (auto& [e, c] : t_) {
      Exp f = e;
      long podd = 0;
      for (int m = 1; m <= d_; m += 2) {
        std::swap(f[kY * d_ + m - 1], f[kZ * d_ + m - 1]);
        podd += e[kP * d_ + m - 1];
      }
      r.add_coeff(f, (podd % 2 == 0) ? c : -c);
    }
    return r;
  }

  /// q -> 1/q on coefficients times q^{weighted degree} on each monomial.
  PlethSeries delta() const {
    PlethSeries r(d_);
    for (auto& [e, c] : t_)
      r.add_coeff(e, c.invert_q() * QRat::q_pow(static_cast<int>(weighted_degree(e))));
    return r;
  }

  /// (this)^alpha via the binomial series; requires constant term 1 and every
  /// other monomial of positive degree (automatic for graded variables).
  PlethSeries pow_scalar(const QRat& alpha) const {
    if (!(constant_term() == QRat(1)))
      throw std::domain_error("PlethSeries::pow_scalar: constant term != 1");
    PlethSeries u = *this;
    u.add_coeff(Exp(4 * d_, 0), QRat(-1));
    PlethSeries acc = one(d_), p = one(d_);
    QRat binom(1);
    for (int k = 1; k <= d_; ++k) {
      p *= u;
      if (p.is_zero()) break;
      binom *= (alpha - QRat(static_cast<long>(k - 1))) * QRat(Rat(1) / Rat(k));
      acc += p.scaled(binom);
    }
    return acc;
  }

  /// exp of a series with zero constant term.
  PlethSeries exp() const {
    if (!(constant_term() == QRat(0)))
      throw std::domain_error("PlethSeries::exp: nonzero constant term");
    PlethSeries acc = one(d_), p = one(d_);
    Rat fact = 1;
    for (int k = 1; k <= d_; ++k) {
      p *= *this;
      if (p.is_zero()) break;
      fact *= k;
      acc += p.scaled(QRat(Rat(1) / fact));
    }
    return acc;
  }

  /// Substitute Z_n -> Z_n + psi^n(s) for every n (the plethystic shift used
  /// by the fixed-point equation); the series may involve only Z variables.
  PlethSeries shift_z(const PlethSeries& s) const {
    check(s);
    std::vector<PlethSeries> img;  // img[n-1] = Z_n + psi^n(s)
    for (int n = 1; n <= d_; ++n) img.push_back(variable(d_, kZ, n) + s.psi(n));
    std::vector<std::vector<PlethSeries>> pows(d_);
    for (int n = 0; n < d_; ++n) pows[n].push_back(one(d_));
    PlethSeries r(d_);
    for (auto& [e, c] : t_) {
      PlethSeries m = one(d_);
      for (int b = 0; b < 4; ++b)
        for (int n = 1; n <= d_; ++n) {
          int x = e[b * d_ + n - 1];
          if (x == 0) continue;
          if (b != kZ)
            throw std::domain_error("PlethSeries::shift_z: non-Z variable present");
          while (static_cast<int>(pows[n - 1].size()) <= x)
            pows[n - 1].push_back(pows[n - 1].back() * img[n - 1]);
          m *= pows[n - 1][x];
        }
      r += m.scaled(c);
    }
    return r;
  }

  /// Specialize Z_1 -> x, all other variables -> 0; returns coefficients of
  /// x^0..x^D.  Only meaningful for series in the Z bank.
  std::vector<QRat> z1_specialization() const {
    std::vector<QRat> out(d_ + 1, QRat(0));
    for (auto& [e, c] : t_) {
      bool pure = true;
      for (size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0 && static_cast<int>(i) != kZ * d_) pure = false;
      if (pure) out[e[kZ * d_]] += c;
    }
    return out;
  }

 private:
  void check(const PlethSeries& o) const {
    if (d_ != o.d_) throw std::invalid_argument("PlethSeries: degree mismatch");
  }
  int d_;
  std::map<Exp, QRat> t_;
};

/// Number of monic irreducibles of degree n over F_q as a polynomial in q
/// (divided Moebius sum), realized exactly as a rational function.
inline QRat irreducible_count_poly(int n) {
  LaurentQ num;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    int m = moebius(d);
    if (m != 0) num += LaurentQ::q_pow(n / d) * LaurentQ(Rat(m));
  }
  return QRat(num) * QRat(Rat(1) / Rat(n));
}

/// d/dZ_1 of the square-free counting element:
///   (-1 - q Z_1 + prod_n (1+Z_n)^{Irr_q(n)}) / (q(q-1)).
inline PlethSeries squarefree_derivative_element(int D) {
  PlethSeries prod = PlethSeries::one(D);
  for (int n = 1; n <= D; ++n) {
    PlethSeries base = PlethSeries::one(D) + PlethSeries::variable(D, PlethSeries::kZ, n);
    prod *= base.pow_scalar(irreducible_count_poly(n));
  }
  PlethSeries num = prod - PlethSeries::one(D) -
                    PlethSeries::variable(D, PlethSeries::kZ, 1).scaled(QRat::q_pow(1));
  QRat qq1 = QRat(LaurentQ::q_pow(2) - LaurentQ::q_pow(1));
  return num.scaled(QRat(1) / qq1);
}

/// The unique solution S of F(Z_1 + S, Z_2 + psi^2 S, ...) = S where F is the
/// derivative element above.  The grading forces convergence in <= D steps;
/// one extra step asserts stability.
inline PlethSeries plethystic_fixed_point(int D) {
  if (D < 1 || D > 8)
    throw std::invalid_argument("plethystic_fixed_point: degree must be in 1..8");
  PlethSeries f = squarefree_derivative_element(D);
  PlethSeries s(D);
  for (int it = 0; it < D; ++it) s = f.shift_z(s);
  if (!(f.shift_z(s) == s))
    throw std::logic_error("plethystic_fixed_point: iteration did not stabilize");
  // Every monomial of S has degree >= 2.
  for (auto& [e, c] : s.terms())
    if (s.weighted_degree(e) < 2)
      throw std::logic_error("plethystic_fixed_point: monomial of degree < 2");
  return s;
}

/// The exponential element E(p) = exp(sum_n p_n / n).
inline PlethSeries pleth_exponential(int D) {
  PlethSeries arg(D);
  for (int n = 1; n <= D; ++n)
    arg += PlethSeries::variable(D, PlethSeries::kP, n).scaled(QRat(Rat(1) / Rat(n)));
  return arg.exp();
}

/// Exact check of prod_n (psi^n E(p))^{Irr_q(n)} = delta(E(p)) to degree D.
inline bool zeta_euler_holds(int D) {
  PlethSeries e = pleth_exponential(D);
  PlethSeries lhs = PlethSeries::one(D);
  for (int n = 1; n <= D; ++n) lhs *= e.psi(n).pow_scalar(irreducible_count_poly(n));
  return lhs == e.delta();
}

// ---------------------------------------------------------------------------
// Split-case triple and its compositional inverse
// ---------------------------------------------------------------------------

/// Truncation caps for the split-case series: total degree in (x, y, z) and
/// per-variable degree in each t_k.
struct SplitCaps {
  int xdeg = 4;
  int tdeg = 2;
};

/// The triple (c_odd(x,y,z), c_even(x,z,y; -T), c_even(x,y,z)) at a fixed
/// prime power, on a shared contract in (x, y, z, t_1..t_r) with the t's
/// weightless so the total cap bounds only the (x, y, z) degree.
struct SplitTriple {
  long q0 = 0;
  int r = 0;
  SplitCaps caps;
  SeriesSpec spec;   ///< x, y, z, t_1..t_r
  SeriesSpec tspec;  ///< t-only contract used for the stratum sums
  Series<Rat> c1, c2, c3;
};

/// Outcome of the inverse verification, with per-check detail.
struct SplitInverseReport {
  bool ok = true;
  std::string first_failure;          ///< provenance of the first bad coefficient
  std::vector<std::string> checks;    ///< human-readable pass/fail lines
  std::map<int, bool> power_vanishes; ///< x^N coefficient of component 1 is 0, N = 2..4
};

namespace detail {

inline const FiniteField& field_for(long q) {
  for (int p = 2; static_cast<long>(p) * p <= q; ++p) {
    if (q % p == 0) {
      int e = 0;
      long m = q;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      if (m != 1) throw std::invalid_argument("field_for: not a prime power");
      return FieldRegistry::get(p, e);
    }
  }
  return FieldRegistry::get(static_cast<int>(q), 1);
}

/// Lift a t-only series onto the full (x, y, z, t) contract.
inline Series<Rat> embed_t(const Series<Rat>& ts, const SeriesSpec& spec) {
  Series<Rat> r(spec);
  for (auto& [e, c] : ts.terms()) {
    Series<Rat>::Exp f(spec.nvars, 0);
    for (size_t k = 0; k < e.size(); ++k) f[3 + k] = e[k];
    r.add_coeff(f, c);
  }
  return r;
}

inline Series<Rat> swap_yz(const Series<Rat>& s) {
  Series<Rat> r(s.spec());
  for (auto& [e, c] : s.terms()) {
    Series<Rat>::Exp f = e;
    std::swap(f[1], f[2]);
    r.add_coeff(f, c);
  }
  return r;
}

inline std::vector<int> all_t_vars(int r) {
  std::vector<int> v(r);
  for (int k = 0; k < r; ++k) v[k] = 3 + k;
  return v;
}

inline Rat rat_pow(const Rat& b, long n) {
  Rat r = 1;
  for (long k = 0; k < n; ++k) r *= b;
  return r;
}

/// Shared assembly of (c_odd, c_even) from a table of stratum series already
/// lifted to the full contract.  `exponent` is q for the inner triple and 1/q
/// for the transformed outer one; the first term of c_even uses the formal
/// binomial series for that exponent.
inline std::pair<Series<Rat>, Series<Rat>> assemble_components(
    const SeriesSpec& spec,
    const std::function<Series<Rat>(int, int, int)>& table, int nmax,
    const Series<Rat>& etp, const Series<Rat>& etm, const Rat& exponent) {
  int xd = static_cast<int>(spec.total_cap);
  Series<Rat> etp_inv = etp.inverse(), etm_inv = etm.inverse();
  Series<Rat> z = Series<Rat>::variable(spec, 2);
  Series<Rat> co(spec);
  Series<Rat> ce = etp * ((Series<Rat>::one(spec) + z * etp_inv).pow_scalar(exponent) -
                          Series<Rat>::one(spec));
  for (int n = 1; n <= std::min(nmax, xd); ++n) {
    for (int i = 0; n + i <= xd; ++i)
      for (int j = 0; n + i + j <= xd; ++j) {
        Series<Rat> a = table(n, i, j);
        if (a.is_zero()) continue;
        Rat fact = 1;
        for (int k = 2; k <= i; ++k) fact *= k;
        for (int k = 2; k <= j; ++k) fact *= k;
        Series<Rat>::Exp e(spec.nvars, 0);
        e[0] = n;
        e[1] = i;
        e[2] = j;
        Series<Rat> term = a * Series<Rat>::monomial(spec, e, Rat(1) / fact);
        for (int k = 0; k < i; ++k) term *= etm_inv;
        for (int k = 0; k < j; ++k) term *= etp_inv;
        if (n % 2 == 1)
          co += term;
        else
          ce += term;
      }
  }
  return {co, ce};
}

}  // namespace detail

/// Build the split-case triple at a fixed odd prime power q0 with r auxiliary
/// t variables.  The stratum series A_{n,i,j} come from the fully-split
/// square-free strata with falling-factorial weights; the oddness symmetry
/// A_{n,i,j}(-T) = A_{n,j,i}(T) for odd n is asserted during the build.
inline SplitTriple build_split_c(long q0, int r, const SplitCaps& caps) {
  if (q0 < 3 || q0 % 2 == 0) throw std::invalid_argument("build_split_c: q0 must be odd >= 3");
  if (r < 0 || caps.xdeg < 1) throw std::invalid_argument("build_split_c: bad caps");
  const FiniteField& f = detail::field_for(q0);
  SplitTriple tr;
  tr.q0 = q0;
  tr.r = r;
  tr.caps = caps;
  tr.tspec = SeriesSpec::uniform(r, caps.tdeg);
  tr.spec.nvars = 3 + r;
  tr.spec.caps.assign(3, caps.xdeg);
  tr.spec.caps.resize(3 + r, caps.tdeg);
  tr.spec.total_cap = caps.xdeg;
  tr.spec.weights.assign(3, 1);
  tr.spec.weights.resize(3 + r, 0);
  tr.spec.names = {"x", "y", "z"};
  for (int k = 1; k <= r; ++k) tr.spec.names.push_back("t" + std::to_string(k));

  // Stratum table on the full contract, indexed by (n, i, j).
  std::map<std::tuple<int, int, int>, Series<Rat>> table;
  auto lookup = [&](int n, int i, int j) -> Series<Rat> {
    auto it = table.find({n, i, j});
    if (it != table.end()) return it->second;
    FactorType nt, itp, jt;
    if (n) nt[1] = n;
    if (i) itp[1] = i;
    if (j) jt[1] = j;
    Series<Rat> a = detail::embed_t(series_Aij(f, nt, itp, jt, tr.tspec), tr.spec);
    table.emplace(std::make_tuple(n, i, j), a);
    return a;
  };
  for (int n = 1; n <= caps.xdeg; ++n)
    for (int i = 0; n + i <= caps.xdeg; ++i)
      for (int j = 0; n + i + j <= caps.xdeg; ++j) {
        Series<Rat> a = lookup(n, i, j);
        if (n % 2 == 1 &&
            a.negate_variables(detail::all_t_vars(r)) != lookup(n, j, i))
          throw std::logic_error("build_split_c: odd-stratum T -> -T symmetry failed");
      }

  Series<Rat> etp =
      detail::embed_t(series_E(tr.tspec, Rat(1)) * series_E(tr.tspec, Rat(q0)), tr.spec);
  Series<Rat> etm =
      detail::embed_t(series_E(tr.tspec, Rat(-1)) * series_E(tr.tspec, Rat(-q0)), tr.spec);
  auto tab = [&](int n, int i, int j) { return lookup(n, i, j); };
  auto tab_neg = [&](int n, int i, int j) {
    return lookup(n, i, j).negate_variables(detail::all_t_vars(r));
  };
  auto [co, ce] = detail::assemble_components(tr.spec, tab, caps.xdeg, etp, etm, Rat(q0));
  auto [co2, ce2] =
      detail::assemble_components(tr.spec, tab_neg, caps.xdeg, etm, etp, Rat(q0));
  (void)co2;
  tr.c1 = co;
  tr.c2 = detail::swap_yz(ce2);
  tr.c3 = ce;
  return tr;
}

namespace detail {

/// Interpolate every t-coefficient of A_{n,i,j} across many primes into the
/// Weil ring (pure q-power basis, with surplus samples certifying the fit),
/// apply the q -> 1/q ring involution there, and evaluate back at q0.  The
/// extra factor q0^{t-degree} realizes T -> q T.
inline Series<Rat> sigma_stratum_series(int n, int i, int j, const SeriesSpec& tspec,
                                        long q0) {
  static const std::vector<long> grid = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
  std::vector<WeilBasisTerm> basis;
  for (int e = 0; e <= 7; ++e) basis.push_back({e, 0});
  // Collect the sampled series and the union of their supports.
  std::vector<Series<Rat>> samples;
  std::set<Series<Rat>::Exp> support;
  for (long qs : grid) {
    FactorType nt, itp, jt;
    if (n) nt[1] = n;
    if (i) itp[1] = i;
    if (j) jt[1] = j;
    Series<Rat> a = series_Aij(field_for(qs), nt, itp, jt, tspec);
    for (auto& [e, c] : a.terms()) support.insert(e);
    samples.push_back(std::move(a));
  }
  auto hecke_unused = [](int) -> Rat {
    throw std::logic_error("sigma_stratum_series: unexpected symbol evaluation");
  };
  Series<Rat> out(tspec);
  for (const auto& e : support) {
    std::vector<std::pair<long, Rat>> pts;
    for (size_t k = 0; k < grid.size(); ++k) pts.emplace_back(grid[k], samples[k].coeff(e));
    WeilElement w = interpolate_weil(pts, basis).sigma();
    long wt = 0;
    for (int x : e) wt += x;
    Rat v = w.eval(Rat(q0), hecke_unused) * rat_pow(Rat(q0), wt);
    out.add_coeff(e, v);
  }
  return out;
}

}  // namespace detail

/// Verify that the triple built from (qT, 1/q) is a left compositional
/// inverse of the given triple: composing the transformed components with
/// (c1, c2, c3) must return exactly (x, y, z) up to the caps.  The
/// transformed stratum coefficients are obtained by Weil-ring interpolation
/// (degrees n <= 4 only), and the x^N coefficients of the first component are
/// additionally reported one by one.
inline SplitInverseReport verify_split_inverse(const SplitTriple& tr) {
  if (tr.caps.xdeg > 4)
    throw std::invalid_argument(
        "verify_split_inverse: transformed stratum series certified only up to degree 4");
  SplitInverseReport rep;
  const SeriesSpec& spec = tr.spec;

  // sigma-transformed stratum table; E(T)E(qT) is invariant under the
  // transform (and likewise with -T), so the outer triple reuses the same
  // exponential factors.
  std::map<std::tuple<int, int, int>, Series<Rat>> stable;
  auto slookup = [&](int n, int i, int j) -> Series<Rat> {
    auto it = stable.find({n, i, j});
    if (it != stable.end()) return it->second;
    Series<Rat> a =
        detail::embed_t(detail::sigma_stratum_series(n, i, j, tr.tspec, tr.q0), spec);
    stable.emplace(std::make_tuple(n, i, j), a);
    return a;
  };
  Series<Rat> etp =
      detail::embed_t(series_E(tr.tspec, Rat(1)) * series_E(tr.tspec, Rat(tr.q0)), spec);
  Series<Rat> etm =
      detail::embed_t(series_E(tr.tspec, Rat(-1)) * series_E(tr.tspec, Rat(-tr.q0)), spec);
  auto tab = [&](int n, int i, int j) { return slookup(n, i, j); };
  auto tab_neg = [&](int n, int i, int j) {
    return slookup(n, i, j).negate_variables(detail::all_t_vars(tr.r));
  };
  Rat outer_exp = Rat(1) / Rat(tr.q0);
  auto [oc1, oce] = detail::assemble_components(spec, tab, tr.caps.xdeg, etp, etm, outer_exp);
  auto [oc2_raw, oce2] =
      detail::assemble_components(spec, tab_neg, tr.caps.xdeg, etm, etp, outer_exp);
  (void)oc2_raw;
  Series<Rat> o1 = oc1, o2 = detail::swap_yz(oce2), o3 = oce;

  // Compose: substitute (c1, c2, c3) for (x, y, z), identity on the t's.
  std::vector<Series<Rat>> subs = {tr.c1, tr.c2, tr.c3};
  for (int k = 0; k < tr.r; ++k) subs.push_back(Series<Rat>::variable(spec, 3 + k));
  Series<Rat> r1 = o1.compose(subs), r2 = o2.compose(subs), r3 = o3.compose(subs);

  auto record = [&](const std::string& name, const Series<Rat>& got,
                    const Series<Rat>& want) {
    if (got == want) {
      rep.checks.push_back(name + ": ok");
      return;
    }
    rep.ok = false;
    Series<Rat> diff = got - want;
    const auto& [e, c] = *diff.terms().begin();
    std::ostringstream os;
    os << name << ": first nonvanishing coefficient " << c.get_str() << " at";
    for (int v = 0; v < spec.nvars; ++v)
      if (e[v]) os << " " << spec.names[v] << "^" << e[v];
    os << " (q0=" << tr.q0 << ", caps x<=" << tr.caps.xdeg << ", t<=" << tr.caps.tdeg
       << "; transformed outer triple composed with inner triple)";
    rep.checks.push_back(os.str());
    if (rep.first_failure.empty()) rep.first_failure = os.str();
  };
  record("component 1 -> x", r1, Series<Rat>::variable(spec, 0));
  record("component 2 -> y", r2, Series<Rat>::variable(spec, 1));
  record("component 3 -> z", r3, Series<Rat>::variable(spec, 2));

  // Individual power checks on component 1: the x^N coefficients (with any
  // t-dependence) must vanish for N >= 2; these are the degree-N relations
  // among the transformed stratum sums.
  for (int N = 2; N <= tr.caps.xdeg; ++N) {
    bool zero = true;
    for (auto& [e, c] : r1.terms())
      if (e[0] == N && e[1] == 0 && e[2] == 0) zero = false;
    rep.power_vanishes[N] = zero;
    if (!zero) rep.ok = false;
    rep.checks.push_back("x^" + std::to_string(N) + " coefficient of component 1: " +
                         (zero ? "0" : "nonzero"));
  }
  return rep;
}

}  // namespace qmds
