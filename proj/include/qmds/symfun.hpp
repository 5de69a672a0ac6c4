#pragma once
/**
 * @file symfun.hpp
 * @brief Symplectic Schur functions, symmetric-group characters, and the
 *        cohomological trace extraction for hyperelliptic moment sums.
 *
 * The moment generating series over square-free discriminants decomposes
 * exactly into symplectic Schur functions evaluated at q^{+-1/2} T^{+-1},
 * with coefficients the Frobenius traces on compactly-supported Euler
 * characteristics of local systems on the hyperelliptic moduli stack.  This
 * header provides the symmetric-function side (Schur evaluations, the dual
 * Cauchy identity, S_n characters, dimension constants) and the exact linear
 * extraction of the trace coefficients from brute-force moment data.
 */

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "qmds/curves.hpp"
#include "qmds/ffield.hpp"
#include "qmds/hecke.hpp"
#include "qmds/laurent.hpp"
#include "qmds/polyspace.hpp"
#include "qmds/rational.hpp"
#include "qmds/weil.hpp"

namespace qmds {

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

/// A partition: weakly decreasing positive parts (possibly empty).
using Partition = std::vector<int>;

inline int partition_weight(const Partition& lam) {
  int w = 0;
  for (int p : lam) w += p;
  return w;
}

/// Conjugate partition, padded with zeros to `len` entries (len >= lam[0]).
inline std::vector<int> conjugate_padded(const Partition& lam, int len) {
  std::vector<int> c(len, 0);
  for (int i = 0; i < len; ++i)
    for (int p : lam)
      if (p > i) ++c[i];
  return c;
}

/// Does lam fit in the g x r box (at most g parts, each at most r)?
inline bool fits_in_box(const Partition& lam, int g, int r) {
  if (static_cast<int>(lam.size()) > g) return false;
  for (int p : lam)
    if (p > r) return false;
  return true;
}

/// Complementary partition in the g x r box: (g - c_r >= ... >= g - c_1)
/// where (c_1 >= ... >= c_r) is the padded conjugate of lam.  Its weight is
/// gr - |lam|.
inline Partition box_complement(const Partition& lam, int g, int r) {
  if (!fits_in_box(lam, g, r))
    throw std::invalid_argument("box_complement: partition does not fit the box");
  std::vector<int> c = conjugate_padded(lam, r);
  Partition out;
  for (int i = r - 1; i >= 0; --i)
    if (g - c[i] > 0) out.push_back(g - c[i]);
  return out;
}

/// All partitions inside the g x r box (at most g parts, each <= r).
inline std::vector<Partition> partitions_in_box(int g, int r) {
  std::vector<Partition> out;
  std::function<void(Partition&, int)> rec = [&](Partition& cur, int mx) {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) == g) return;
    for (int p = 1; p <= mx; ++p) {
      cur.push_back(p);
      rec(cur, p);
      cur.pop_back();
    }
  };
  Partition cur;
  rec(cur, r);
  return out;
}

/// All partitions of n, each sorted in decreasing order.
inline std::vector<Partition> partitions_of(int n) {
  std::vector<Partition> out;
  std::function<void(Partition&, int, int)> rec = [&](Partition& cur, int rem, int mx) {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(rem, mx); p >= 1; --p) {
      cur.push_back(p);
      rec(cur, rem - p, p);
      cur.pop_back();
    }
  };
  Partition cur;
  rec(cur, n, n);
  return out;
}

/// z(nu) = prod_i m_i! i^{m_i} over the part multiplicities m_i of nu; the
/// order of the centralizer of a permutation of cycle type nu.
inline Int partition_z(const Partition& nu) {
  std::map<int, int> mult;
  for (int p : nu) ++mult[p];
  Int z(1);
  for (auto& [i, m] : mult) {
    z *= factorial(m);
    for (int k = 0; k < m; ++k) z *= i;
  }
  return z;
}

// ---------------------------------------------------------------------------
// Sparse multivariate Laurent polynomials (exact, arbitrary integer exponents)
// ---------------------------------------------------------------------------

/// Minimal sparse Laurent polynomial in a fixed number of variables over an
/// exact coefficient field C.  Used for the symbolic Schur evaluations where
/// negative exponents are essential (truncated power series do not apply).
template <class C>
class MultiLaurent {
 public:
  using Exp = std::vector<int>;

  MultiLaurent() : nvars_(0) {}
  explicit MultiLaurent(int nvars) : nvars_(nvars) {}

  static MultiLaurent one(int nvars) {
    MultiLaurent m(nvars);
    m.terms_[Exp(nvars, 0)] = C(1);
    return m;
  }
  static MultiLaurent monomial(Exp e, C c) {
    MultiLaurent m(static_cast<int>(e.size()));
    if (!(c == C(0))) m.terms_[std::move(e)] = std::move(c);
    return m;
  }

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exp, C>& terms() const { return terms_; }

  void add_term(const Exp& e, const C& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (!(c == C(0))) terms_[e] = c;
    } else {
      it->second = it->second + c;
      if (it->second == C(0)) terms_.erase(it);
    }
  }

  MultiLaurent operator+(const MultiLaurent& o) const {
    MultiLaurent r = *this;
    r.nvars_ = std::max(nvars_, o.nvars_);
    for (auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  MultiLaurent operator-(const MultiLaurent& o) const {
    MultiLaurent r = *this;
    r.nvars_ = std::max(nvars_, o.nvars_);
    for (auto& [e, c] : o.terms_) r.add_term(e, C(0) - c);
    return r;
  }
  MultiLaurent operator*(const MultiLaurent& o) const {
    MultiLaurent r(std::max(nvars_, o.nvars_));
    for (auto& [ea, ca] : terms_)
      for (auto& [eb, cb] : o.terms_) {
        Exp e(ea);
        for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  MultiLaurent scaled(const C& c) const {
    MultiLaurent r(nvars_);
    if (c == C(0)) return r;
    for (auto& [e, v] : terms_) r.terms_[e] = v * c;
    return r;
  }
  bool operator==(const MultiLaurent& o) const { return terms_ == o.terms_; }

 private:
  int nvars_;
  std::map<Exp, C> terms_;
};

// ---------------------------------------------------------------------------
// Symplectic Schur functions
// ---------------------------------------------------------------------------

namespace detail {

/// Complete homogeneous symmetric polynomials h_0..h_kmax of the given
/// values, by the one-variable-at-a-time recurrence.  Division-free.
template <class R>
std::vector<R> complete_homogeneous(const std::vector<R>& vals, int kmax, const R& one) {
  std::vector<R> h(kmax + 1, R{});
  h[0] = one;
  for (const R& v : vals)
    for (int k = 1; k <= kmax; ++k) h[k] = h[k] + v * h[k - 1];
  return h;
}

/// Determinant by cofactor expansion (tiny matrices only).
template <class R>
R cofactor_det(const std::vector<std::vector<R>>& m) {
  size_t n = m.size();
  if (n == 1) return m[0][0];
  R acc{};
  for (size_t j = 0; j < n; ++j) {
    std::vector<std::vector<R>> minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<R> row;
      for (size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    R t = m[0][j] * cofactor_det(minor);
    if (j % 2 == 0)
      acc = acc + t;
    else
      acc = acc - t;
  }
  return acc;
}

}  // namespace detail

/// Irreducible symplectic character s_<lam> evaluated at the 2g values
/// `vals` (a multiset closed under inversion: z_1, 1/z_1, ..., z_g, 1/z_g).
/// Computed by the determinantal formula
///     s_<lam> = (1/2) det( h_{lam_i - i + j} + h_{lam_i - i - j + 2} )
/// in the complete homogeneous polynomials of the 2g values.  Being
/// division-free, this is simultaneously the limiting (confluent) value of
/// the Weyl determinant ratio at repeated or degenerate points.  `one` is
/// the multiplicative unit of the coefficient ring R; R must be a module
/// over the rationals (halving is exact).
template <class R>
R symplectic_schur(const Partition& lam, const std::vector<R>& vals, const R& one) {
  if (vals.empty() || vals.size() % 2 != 0)
    throw std::invalid_argument("symplectic_schur: need 2g values");
  int g = static_cast<int>(vals.size()) / 2;
  int l = static_cast<int>(lam.size());
  if (l == 0) return one;
  if (l > g) throw std::invalid_argument("symplectic_schur: more parts than value pairs");
  int kmax = lam[0] + l;
  std::vector<R> h = detail::complete_homogeneous(vals, kmax, one);
  auto H = [&](int k) -> R {
    if (k < 0 || k > kmax) return R{};
    return h[k];
  };
  std::vector<std::vector<R>> m(l, std::vector<R>(l));
  for (int i = 1; i <= l; ++i)
    for (int j = 1; j <= l; ++j) m[i - 1][j - 1] = H(lam[i - 1] - i + j) + H(lam[i - 1] - i - j + 2);
  R d = detail::cofactor_det(m);
  return d.halved();
}

// Scalar coefficient types need an exact halving; provide it for the two
// scalar rings used here via a thin adapter.

/// Exact field Q(sqrt(q0)) for a fixed non-square q0: elements a + b*s with
/// s^2 = q0.  Used to evaluate Schur functions at q^{+-1/2} t^{+-1} with a
/// numeric q.
class QuadraticExt {
 public:
  QuadraticExt() : a_(0), b_(0), q0_(0) {}
  QuadraticExt(long v) : a_(v), b_(0), q0_(0) {}  // NOLINT(google-explicit-constructor)
  QuadraticExt(Rat a, Rat b, long q0) : a_(std::move(a)), b_(std::move(b)), q0_(q0) {
    if (b_ == Rat(0)) q0_ = 0;
  }
  static QuadraticExt sqrt_q(long q0) { return QuadraticExt(Rat(0), Rat(1), q0); }

  const Rat& rational_part() const { return a_; }
  const Rat& surd_part() const { return b_; }
  bool is_rational() const { return b_ == Rat(0); }

  QuadraticExt operator+(const QuadraticExt& o) const {
    return QuadraticExt(a_ + o.a_, b_ + o.b_, merge_q(o));
  }
  QuadraticExt operator-(const QuadraticExt& o) const {
    return QuadraticExt(a_ - o.a_, b_ - o.b_, merge_q(o));
  }
  QuadraticExt operator*(const QuadraticExt& o) const {
    long q = merge_q(o);
    return QuadraticExt(a_ * o.a_ + b_ * o.b_ * Rat(q), a_ * o.b_ + b_ * o.a_, q);
  }
  QuadraticExt inverse() const {
    Rat n = a_ * a_ - b_ * b_ * Rat(q0_);
    if (n == Rat(0)) throw std::domain_error("QuadraticExt: not invertible");
    return QuadraticExt(a_ / n, -b_ / n, q0_);
  }
  QuadraticExt operator/(const QuadraticExt& o) const { return *this * o.inverse(); }
  QuadraticExt halved() const { return QuadraticExt(a_ / Rat(2), b_ / Rat(2), q0_); }
  bool operator==(const QuadraticExt& o) const { return a_ == o.a_ && b_ == o.b_; }

 private:
  long merge_q(const QuadraticExt& o) const {
    if (q0_ != 0 && o.q0_ != 0 && q0_ != o.q0_)
      throw std::invalid_argument("QuadraticExt: mixed radicands");
    return q0_ != 0 ? q0_ : o.q0_;
  }
  Rat a_, b_;
  long q0_;
};

}  // namespace qmds

// halved() adapters so symplectic_schur works uniformly over all the
// coefficient rings used in this project.
namespace qmds {
namespace detail {

template <class C>
struct HasHalved {
  template <class T>
  static auto test(int) -> decltype(std::declval<T>().halved(), std::true_type{});
  template <class>
  static std::false_type test(...);
  static constexpr bool value = decltype(test<C>(0))::value;
};

}  // namespace detail

/// Wrapper giving Rat, LaurentQ and MultiLaurent a uniform halved() without
/// touching their headers.
template <class R>
struct SchurRing {
  R v;
  SchurRing() : v{} {}
  SchurRing(R x) : v(std::move(x)) {}  // NOLINT(google-explicit-constructor)
  SchurRing operator+(const SchurRing& o) const { return SchurRing(v + o.v); }
  SchurRing operator-(const SchurRing& o) const { return SchurRing(v - o.v); }
  SchurRing operator*(const SchurRing& o) const { return SchurRing(v * o.v); }
  SchurRing halved() const {
    if constexpr (detail::HasHalved<R>::value)
      return SchurRing(v.halved());
    else if constexpr (std::is_same_v<R, Rat>)
      return SchurRing(v / Rat(2));
    else
      return SchurRing(v.scaled(typename R::value_type(1) / typename R::value_type(2)));
  }
  bool operator==(const SchurRing& o) const { return v == o.v; }
};

/// symplectic_schur over plain rationals.
inline Rat symplectic_schur_rat(const Partition& lam, const std::vector<Rat>& vals) {
  std::vector<SchurRing<Rat>> w(vals.begin(), vals.end());
  return symplectic_schur(lam, w, SchurRing<Rat>(Rat(1))).v;
}

/// symplectic_schur over Q(sqrt q0).
inline QuadraticExt symplectic_schur_quad(const Partition& lam,
                                          const std::vector<QuadraticExt>& vals) {
  return symplectic_schur(lam, vals, QuadraticExt(1));
}

// MultiLaurent<Rat> halving.
template <>
inline SchurRing<MultiLaurent<Rat>> SchurRing<MultiLaurent<Rat>>::halved() const {
  return SchurRing(v.scaled(Rat(1, 2)));
}
template <>
inline SchurRing<MultiLaurent<QuadraticExt>> SchurRing<MultiLaurent<QuadraticExt>>::halved()
    const {
  return SchurRing(v.scaled(QuadraticExt(Rat(1, 2), Rat(0), 0)));
}
// LaurentQ halving.
template <>
inline SchurRing<LaurentQ> SchurRing<LaurentQ>::halved() const {
  return SchurRing(v * LaurentQ(Rat(1, 2)));
}

/// symplectic_schur as a Laurent polynomial in q^{1/2}: evaluates at the 2g
/// monomial values given as LaurentQ elements.
inline LaurentQ symplectic_schur_laurent(const Partition& lam, const std::vector<LaurentQ>& vals) {
  std::vector<SchurRing<LaurentQ>> w(vals.begin(), vals.end());
  return symplectic_schur(lam, w, SchurRing<LaurentQ>(LaurentQ(1))).v;
}

// ---------------------------------------------------------------------------
// Dual Cauchy identity
// ---------------------------------------------------------------------------

/// Verifies, as an exact Laurent-polynomial identity in formal variables
/// z_1..z_g, t_1..t_r, that
///   prod_{i<=g} prod_{j<=r} (z_i + 1/z_i + t_j + 1/t_j)
///     = sum_{lam in the g x r box} s_<lam>(z^{+-1}) s_<lam^c>(t^{+-1})
/// with lam^c the box complement.  Throws std::logic_error on failure.
inline void dual_cauchy_check(int g, int r) {
  if (g < 1 || r < 1 || g > 3 || r > 3)
    throw std::invalid_argument("dual_cauchy_check: need 1 <= g, r <= 3");
  using ML = MultiLaurent<Rat>;
  using S = SchurRing<ML>;
  int nv = g + r;
  auto var = [&](int i, int e) {
    ML::Exp ex(nv, 0);
    ex[i] = e;
    return S(ML::monomial(ex, Rat(1)));
  };
  S lhs = S(ML::one(nv));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < r; ++j)
      lhs = lhs * (var(i, 1) + var(i, -1) + var(g + j, 1) + var(g + j, -1));
  S rhs = S(ML(nv));
  S one = S(ML::one(nv));
  for (const Partition& lam : partitions_in_box(g, r)) {
    std::vector<S> zs, ts;
    for (int i = 0; i < g; ++i) {
      zs.push_back(var(i, 1));
      zs.push_back(var(i, -1));
    }
    for (int j = 0; j < r; ++j) {
      ts.push_back(var(g + j, 1));
      ts.push_back(var(g + j, -1));
    }
    S a = symplectic_schur(lam, zs, one);
    S b = symplectic_schur(box_complement(lam, g, r), ts, one);
    rhs = rhs + a * b;
  }
  if (!(lhs == rhs)) throw std::logic_error("dual_cauchy_check: identity failed");
}

// ---------------------------------------------------------------------------
// Symmetric group characters (Murnaghan-Nakayama)
// ---------------------------------------------------------------------------

namespace detail {

inline Int mn_character(const Partition& mu, const Partition& rho);

/// Remove a border strip of size `len` from mu ending in row `row` is
/// implicit in the standard recursion below: iterate over all valid strips.
inline Int mn_character(const Partition& mu, const Partition& rho) {
  if (rho.empty()) return mu.empty() ? Int(1) : Int(0);
  if (mu.empty()) return Int(0);
  static std::map<std::pair<Partition, Partition>, Int> memo;
  auto key = std::make_pair(mu, rho);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  int len = rho[0];
  Partition rest(rho.begin() + 1, rho.end());
  Int total(0);
  int k = static_cast<int>(mu.size());
  // Border strips of size len: for each starting row i, the strip occupies
  // rows i..j; removing it must leave a partition.  Standard parametrization:
  // try all (i, j) with the strip determined by the rim.
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      // Strip spanning rows i..j: after removal row i becomes
      // mu[j] - (j - i + ...)... use the classical recipe: new_mu[t] =
      // mu[t+1] - 1 for t in [i, j), new_mu[j] = mu[i] - len + (j - i).
      std::vector<int> nm(mu);
      long removed = 0;
      for (int t = i; t < j; ++t) {
        removed += mu[t] - (mu[t + 1] - 1);
        nm[t] = mu[t + 1] - 1;
      }
      nm[j] = mu[i] - len + (j - i);
      removed = 0;  // recompute directly
      long before = 0, after = 0;
      for (int p : mu) before += p;
      for (int p : nm) after += p;
      removed = before - after;
      if (removed != len) continue;
      if (nm[j] < 0) continue;
      bool ok = true;
      for (size_t t = 0; t + 1 < nm.size(); ++t)
        if (nm[t] < nm[t + 1]) ok = false;
      if (!ok) continue;
      while (!nm.empty() && nm.back() == 0) nm.pop_back();
      int height = j - i;
      Int sub = mn_character(nm, rest);
      total += (height % 2 == 0) ? sub : -sub;
    }
  }
  memo[key] = total;
  return total;
}

}  // namespace detail

/// Irreducible character chi_mu of S_n evaluated on cycle type rho
/// (|mu| = |rho| = n), by the Murnaghan-Nakayama rule.
inline Int sn_character(const Partition& mu, const Partition& rho) {
  if (partition_weight(mu) != partition_weight(rho))
    throw std::invalid_argument("sn_character: weights differ");
  if (partition_weight(mu) > 12)
    throw std::invalid_argument("sn_character: supported only for n <= 12");
  return detail::mn_character(mu, rho);
}

/// dim of the S_n irreducible for mu: n!/prod(mu_i + k - i)! times the
/// Vandermonde prod_{i<j}(mu_i - mu_j + j - i), k = #parts.
inline Int sn_dimension(const Partition& mu) {
  int n = partition_weight(mu);
  int k = static_cast<int>(mu.size());
  if (k == 0) return Int(1);
  Rat d(factorial(n));
  for (int i = 1; i <= k; ++i) d /= Rat(factorial(mu[i - 1] + k - i));
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) d *= Rat(mu[i - 1] - mu[j - 1] + j - i);
  if (d.get_den() != 1) throw std::logic_error("sn_dimension: non-integer");
  return d.get_num();
}

// ---------------------------------------------------------------------------
// Exact linear algebra (small dense systems over Q)
// ---------------------------------------------------------------------------

struct SingularSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InconsistentSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Solve the (generally overdetermined) system A x = b exactly.  Requires a
/// unique solution; every surplus equation must hold exactly.  Throws
/// SingularSystemError if the columns are dependent or the system is
/// underdetermined, InconsistentSystemError on a nonzero residual.
inline std::vector<Rat> solve_exact(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
  size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  if (b.size() != rows) throw std::invalid_argument("solve_exact: shape mismatch");
  for (auto& row : a)
    if (row.size() != cols) throw std::invalid_argument("solve_exact: ragged matrix");
  size_t piv = 0;
  std::vector<size_t> pivot_row(cols, 0);
  for (size_t col = 0; col < cols; ++col) {
    size_t sel = rows;
    for (size_t i = piv; i < rows; ++i)
      if (!(a[i][col] == Rat(0))) {
        sel = i;
        break;
      }
    if (sel == rows) throw SingularSystemError("solve_exact: rank-deficient system");
    std::swap(a[piv], a[sel]);
    std::swap(b[piv], b[sel]);
    Rat inv = Rat(1) / a[piv][col];
    for (size_t j = col; j < cols; ++j) a[piv][j] *= inv;
    b[piv] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == piv) continue;
      Rat f = a[i][col];
      if (f == Rat(0)) continue;
      for (size_t j = col; j < cols; ++j) a[i][j] -= f * a[piv][j];
      b[i] -= f * b[piv];
    }
    pivot_row[col] = piv;
    ++piv;
  }
  for (size_t i = piv; i < rows; ++i)
    if (!(b[i] == Rat(0)))
      throw InconsistentSystemError("solve_exact: nonzero residual on surplus equation");
  std::vector<Rat> x(cols);
  for (size_t col = 0; col < cols; ++col) x[col] = b[pivot_row[col]];
  return x;
}

// ---------------------------------------------------------------------------
// Trace extraction from brute-force moment data
// ---------------------------------------------------------------------------

/// Frobenius traces on the Euler characteristics e_c of the local systems
/// indexed by even partitions in the g x r box, extracted from the moment
/// generating polynomial at a fixed odd prime power q0.  `stratum` is empty
/// for the full marked-point moduli (monic square-free discriminants of
/// degree 2g+1, normalized by 1/(q(q-1))), or the string form of a partition
/// nu of 2g+2 for the ramification stratum with fields of definition nu
/// (all square-free polynomials of degree 2g+1 or 2g+2, any leading
/// coefficient, normalized by z(nu)/|GL_2(F_q)|).
struct TraceVector {
  int g = 0;
  int r = 0;
  long q0 = 0;
  std::string stratum;  // "w1" or e.g. "nu=(2,1,1)"
  std::map<Partition, Rat> traces;
};

namespace detail {

/// prod_k P_{C_d}(t_k) accumulated into a sparse exponent map (nonnegative
/// exponents only; MultiLaurent reused as the container).
inline void accumulate_char_poly_product(const Poly& d, int r, MultiLaurent<Rat>& acc) {
  std::vector<Int> p = zeta_numerator(d);
  MultiLaurent<Rat> cur = MultiLaurent<Rat>::one(r);
  for (int k = 0; k < r; ++k) {
    MultiLaurent<Rat> fk(r);
    for (size_t i = 0; i < p.size(); ++i) {
      MultiLaurent<Rat>::Exp e(r, 0);
      e[k] = static_cast<int>(i);
      fk.add_term(e, Rat(p[i]));
    }
    cur = cur * fk;
  }
  acc = acc + cur;
}

inline FactorType to_factor_type(const Partition& nu) {
  FactorType t;
  for (int p : nu) ++t[p];
  return t;
}

}  // namespace detail

/// See TraceVector.  The linear system includes the odd-weight local systems
/// as unknowns as well; their extracted traces are checked to vanish (they
/// contribute only to the sqrt(q)-odd components, which the rational moment
/// data forces to zero).  Every surplus monomial equation must hold exactly.
inline TraceVector extract_traces(int g, int r, long q0, std::optional<Partition> nu = {}) {
  if (g < 1 || g > 2 || r < 1 || r > 2)
    throw std::invalid_argument("extract_traces: need 1 <= g, r <= 2");
  auto [p, e] = prime_power_split(q0);
  if (p == 2) throw std::invalid_argument("extract_traces: q0 must be odd");
  const FiniteField& f = FieldRegistry::get(p, e);
  // zeta_numerator needs fields up to q0^{2g} <= the registry cap.
  for (int j = 1; j <= 2 * g; ++j) FieldRegistry::get(p, e * j);

  MultiLaurent<Rat> lhs(r);
  std::string label;
  Rat norm;
  if (!nu) {
    label = "w1";
    long total = 1;
    for (int i = 0; i < 2 * g + 1; ++i) total *= q0;
    for (long code = 0; code < total; ++code) {
      Poly d = Poly::monic_from_code(f, 2 * g + 1, code);
      if (!is_squarefree(d)) continue;
      detail::accumulate_char_poly_product(d, r, lhs);
    }
    norm = Rat(1) / (Rat(q0) * Rat(q0 - 1));
  } else {
    Partition nv = *nu;
    std::sort(nv.begin(), nv.end(), std::greater<int>());
    if (partition_weight(nv) != 2 * g + 2)
      throw std::invalid_argument("extract_traces: nu must be a partition of 2g+2");
    std::ostringstream os;
    os << "nu=(";
    for (size_t i = 0; i < nv.size(); ++i) os << (i ? "," : "") << nv[i];
    os << ")";
    label = os.str();
    // Degree 2g+2 members of the stratum, all leading coefficients.
    auto add_scaled = [&](const Poly& d) {
      for (long c = 1; c < q0; ++c) detail::accumulate_char_poly_product(d.scaled(c), r, lhs);
    };
    enumerate_stratum(detail::to_factor_type(nv), f, add_scaled);
    // Degree 2g+1 members: the ramification point at infinity accounts for
    // one degree-1 field of definition.
    if (!nv.empty() && nv.back() == 1) {
      Partition sub(nv.begin(), nv.end() - 1);
      enumerate_stratum(detail::to_factor_type(sub), f, add_scaled);
    }
    Rat gl2 = Rat(q0) * Rat(q0 + 1) * Rat(q0 - 1) * Rat(q0 - 1);
    norm = Rat(partition_z(nv)) / gl2;
  }

  // Basis elements: for each lam in the box, (t_1..t_r)^g q^{(gr-|lam|)/2}
  // s_<lam^c>(q^{+-1/2} t^{+-1}), expanded with an extra slot tracking the
  // exponent of sqrt(q).
  std::vector<Partition> lams = partitions_in_box(g, r);
  using ML = MultiLaurent<Rat>;
  using S = SchurRing<ML>;
  int nv2 = r + 1;  // t_1..t_r and the sqrt(q)-exponent slot
  std::map<Partition, ML> basis;
  for (const Partition& lam : lams) {
    std::vector<S> vals;
    for (int k = 0; k < r; ++k) {
      ML::Exp e1(nv2, 0), e2(nv2, 0);
      e1[k] = 1;
      e1[r] = 1;
      e2[k] = -1;
      e2[r] = -1;
      vals.push_back(S(ML::monomial(e1, Rat(1))));
      vals.push_back(S(ML::monomial(e2, Rat(1))));
    }
    S sp = symplectic_schur(box_complement(lam, g, r), vals, S(ML::one(nv2)));
    ML shifted(nv2);
    for (auto& [ex, c] : sp.v.terms()) {
      ML::Exp e(ex);
      for (int k = 0; k < r; ++k) e[k] += g;                       // (t_1..t_r)^g
      e[r] += g * r - partition_weight(lam);                       // q^{(gr-|lam|)/2}
      shifted.add_term(e, c);
    }
    basis[lam] = shifted;
  }

  // Equations: one per (t-monomial, sqrt(q)-parity).  The rational moment
  // data sits entirely in even sqrt(q) parity.
  std::map<std::pair<std::vector<int>, int>, size_t> eq_index;
  auto eq_of = [&](const std::vector<int>& te, int par) {
    auto key = std::make_pair(te, par);
    auto it = eq_index.find(key);
    if (it != eq_index.end()) return it->second;
    size_t idx = eq_index.size();
    eq_index[key] = idx;
    return idx;
  };
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> rhs;
  auto ensure_row = [&](size_t idx) {
    while (rows.size() <= idx) {
      rows.emplace_back(lams.size(), Rat(0));
      rhs.emplace_back(0);
    }
  };
  for (size_t li = 0; li < lams.size(); ++li) {
    for (auto& [ex, c] : basis[lams[li]].terms()) {
      std::vector<int> te(ex.begin(), ex.begin() + r);
      int se = ex[r];
      int par = ((se % 2) + 2) % 2;
      size_t idx = eq_of(te, par);
      ensure_row(idx);
      // coefficient q^{floor(se/2)} (times sqrt(q) if odd; tracked by parity)
      int half = (se - par) / 2;
      Rat qpow(1);
      for (int i = 0; i < std::abs(half); ++i) qpow *= Rat(q0);
      if (half < 0) qpow = Rat(1) / qpow;
      rows[idx][li] += c * qpow;
    }
  }
  for (auto& [ex, c] : lhs.terms()) {
    std::vector<int> te(ex.begin(), ex.end());
    size_t idx = eq_of(te, 0);
    ensure_row(idx);
    rhs[idx] += c * norm;
  }

  std::vector<Rat> sol = solve_exact(rows, rhs);
  TraceVector out;
  out.g = g;
  out.r = r;
  out.q0 = q0;
  out.stratum = label;
  for (size_t li = 0; li < lams.size(); ++li) {
    if (partition_weight(lams[li]) % 2 != 0) {
      if (!(sol[li] == Rat(0)))
        throw std::logic_error("extract_traces: odd-weight trace did not vanish");
      continue;
    }
    out.traces[lams[li]] = sol[li];
  }
  return out;
}

/// Combine the per-stratum trace vectors into the marked-point Euler
/// characteristic: sum over nu of (multiplicity of 1 in nu)/z(nu) times the
/// stratum traces.  Dual route to extract_traces(g, r, q0) without a
/// stratum.
inline TraceVector combine_strata_to_w1(int g, int r, long q0) {
  TraceVector out;
  out.g = g;
  out.r = r;
  out.q0 = q0;
  out.stratum = "w1-from-strata";
  for (const Partition& nuv : partitions_of(2 * g + 2)) {
    int mult1 = static_cast<int>(std::count(nuv.begin(), nuv.end(), 1));
    if (mult1 == 0) continue;
    TraceVector tv = extract_traces(g, r, q0, nuv);
    Rat w = Rat(mult1) / Rat(partition_z(nuv));
    for (auto& [lam, v] : tv.traces) out.traces[lam] += w * v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dimension and moment constants
// ---------------------------------------------------------------------------

struct MomentConstants {
  std::map<Partition, Int> dims;   ///< dim of the rep for each even lam in the box
  Rat leading_constant;            ///< prod_{k<=r} k!/(2k)!
  std::vector<Rat> poly;           ///< coefficients of P_r(x), ascending
};

/// dim of the symplectic irreducible attached to the box complement of lam
/// in the g x r box (the classical Weyl dimension in terms of the padded
/// conjugate of lam in increasing order).
inline Int dim_box_complement(const Partition& lam, int g, int r) {
  std::vector<int> lp = conjugate_padded(lam, r);
  std::sort(lp.begin(), lp.end());  // increasing
  Rat num(1);
  for (int i = 1; i <= r; ++i) num *= Rat(g + r - lp[i - 1] - i + 1);
  for (int i = 1; i <= r; ++i)
    for (int j = i + 1; j <= r; ++j)
      num *= Rat(lp[j - 1] - lp[i - 1] + j - i) * Rat(2 * g + 2 * r + 2 - lp[i - 1] - lp[j - 1] - i - j);
  Rat den(1);
  for (int k = 1; k <= r; ++k) den *= Rat(factorial(2 * k - 1));
  Rat d = num / den;
  if (d.get_den() != 1) throw std::logic_error("dim_box_complement: non-integer");
  return d.get_num();
}

/// Leading moment constants for r-th moments at genus g: the representation
/// dimensions, the arithmetic-factor constant prod k!/(2k)!, and the shape
/// polynomial P_r(x) = prod_i (x + 2i) prod_{i<j} (x + i + j).  Also checks
/// the closed product form of the trivial-system dimension.
inline MomentConstants dim_and_moment_constants(int r, int g) {
  if (r < 1 || r > 6) throw std::invalid_argument("dim_and_moment_constants: need 1 <= r <= 6");
  MomentConstants out;
  for (const Partition& lam : partitions_in_box(g, r))
    if (partition_weight(lam) % 2 == 0) out.dims[lam] = dim_box_complement(lam, g, r);
  out.leading_constant = Rat(1);
  for (int k = 1; k <= r; ++k)
    out.leading_constant *= Rat(factorial(k)) / Rat(factorial(2 * k));
  // P_r(x) as exact coefficients: multiply out the linear factors.
  std::vector<Rat> p{Rat(1)};
  auto mul_linear = [&](long c) {
    std::vector<Rat> np(p.size() + 1, Rat(0));
    for (size_t i = 0; i < p.size(); ++i) {
      np[i] += p[i] * Rat(c);
      np[i + 1] += p[i];
    }
    p = std::move(np);
  };
  for (int i = 1; i <= r; ++i) mul_linear(2 * i);
  for (int i = 1; i <= r; ++i)
    for (int j = i + 1; j <= r; ++j) mul_linear(i + j);
  out.poly = p;
  // Cross-check: dim of the trivial-system rep equals
  // prod k!/(2k)! * P_r(2g) * (r(r+1)/2)! / (r(r+1)/2)!  i.e. the closed
  // product form.
  Rat at2g(0), xp(1);
  for (const Rat& c : p) {
    at2g += c * xp;
    xp *= Rat(2 * g);
  }
  Rat closed = out.leading_constant * at2g;
  if (!(Rat(dim_box_complement({}, g, r)) == closed))
    throw std::logic_error("dim_and_moment_constants: trivial-system dimension mismatch");
  return out;
}

// ---------------------------------------------------------------------------
// Interpolation into the Weil ring
// ---------------------------------------------------------------------------

/// A basis element for interpolation: the function q -> coeff * q^qexp or
/// q -> coeff * q^qexp * T_{2k}(q) (sym = 0 means no Hecke symbol; otherwise
/// sym = k with 2 <= k <= 6, the range carried by the Weil ring).
struct WeilBasisTerm {
  int qexp = 0;
  int sym = 0;
};

inline const std::vector<long>& default_interpolation_points() {
  static const std::vector<long> pts{3, 5, 7, 9, 11, 13, 17, 19};
  return pts;
}

/// Determine the element of the Weil ring with the prescribed support from
/// samples (q0, value).  Requires at least basis.size() + 3 samples; the
/// surplus equations must hold exactly (an inconsistency aborts via
/// InconsistentSystemError).
inline WeilElement interpolate_weil(const std::vector<std::pair<long, Rat>>& samples,
                                    const std::vector<WeilBasisTerm>& basis) {
  if (samples.size() < basis.size() + 3)
    throw std::invalid_argument("interpolate_weil: need at least 3 surplus samples");
  for (const WeilBasisTerm& t : basis)
    if (t.sym != 0 && (t.sym < 2 || t.sym > 6))
      throw std::invalid_argument("interpolate_weil: unsupported symbol");
  std::vector<std::vector<Rat>> a;
  std::vector<Rat> b;
  for (auto& [q0, val] : samples) {
    std::vector<Rat> row;
    for (const WeilBasisTerm& t : basis) {
      Rat qpow(1);
      for (int i = 0; i < std::abs(t.qexp); ++i) qpow *= Rat(q0);
      if (t.qexp < 0) qpow = Rat(1) / qpow;
      if (t.sym != 0) qpow *= Rat(HeckeTable::instance().get(q0, 2 * t.sym));
      row.push_back(qpow);
    }
    a.push_back(std::move(row));
    b.push_back(val);
  }
  std::vector<Rat> x = solve_exact(a, b);
  WeilElement out;
  for (size_t i = 0; i < basis.size(); ++i) {
    if (x[i] == Rat(0)) continue;
    out += WeilElement::monomial(x[i], 2 * basis[i].qexp, basis[i].sym);
  }
  return out;
}

}  // namespace qmds
