/**
 * @file series.hpp
 * @brief Truncated multivariate power series over an arbitrary exact
 *        coefficient ring.
 *
 * A series carries its truncation contract: the number of variables, a cap on
 * the exponent of each variable, and optionally a cap on the weighted total
 * degree (each variable may be assigned a positive integer weight; default 1).
 * All arithmetic silently discards monomials that violate the contract, so a
 * computation that only combines series with identical contracts is exact up
 * to the stated order.
 */
#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmds/rational.hpp"

namespace qmds {

/// Truncation contract shared by the series taking part in a computation.
struct SeriesSpec {
  int nvars = 0;
  std::vector<int> caps;        ///< per-variable exponent caps (inclusive)
  long total_cap = -1;          ///< weighted total degree cap (inclusive); -1 = none
  std::vector<int> weights;     ///< per-variable weights; empty = all 1
  std::vector<std::string> names;  ///< optional display names

  static SeriesSpec uniform(int nvars, int cap, long total = -1) {
    SeriesSpec s;
    s.nvars = nvars;
    s.caps.assign(nvars, cap);
    s.total_cap = total;
    return s;
  }

  long weight_of(const std::vector<int>& e) const {
    long w = 0;
    for (int i = 0; i < nvars; ++i) w += static_cast<long>(e[i]) * (weights.empty() ? 1 : weights[i]);
    return w;
  }
  bool admits(const std::vector<int>& e) const {
    for (int i = 0; i < nvars; ++i)
      if (e[i] < 0 || e[i] > caps[i]) return false;
    return total_cap < 0 || weight_of(e) <= total_cap;
  }
  bool operator==(const SeriesSpec& o) const {
    return nvars == o.nvars && caps == o.caps && total_cap == o.total_cap &&
           (weights.empty() ? std::vector<int>(nvars, 1) : weights) ==
               (o.weights.empty() ? std::vector<int>(o.nvars, 1) : o.weights);
  }
};

template <class R>
class Series {
 public:
  using Exp = std::vector<int>;
  using Map = std::map<Exp, R>;

  Series() = default;
  explicit Series(SeriesSpec spec) : spec_(std::move(spec)) {}
  Series(SeriesSpec spec, const R& c) : spec_(std::move(spec)) {
    set_coeff(Exp(spec_.nvars, 0), c);
  }

  const SeriesSpec& spec() const { return spec_; }
  const Map& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  static Series one(const SeriesSpec& spec) { return Series(spec, R(1)); }
  static Series variable(const SeriesSpec& spec, int i) {
    Series s(spec);
    Exp e(spec.nvars, 0);
    e[i] = 1;
    s.set_coeff(e, R(1));
    return s;
  }
  static Series monomial(const SeriesSpec& spec, const Exp& e, const R& c) {
    Series s(spec);
    s.set_coeff(e, c);
    return s;
  }

  R coeff(const Exp& e) const {
    auto it = t_.find(e);
    return it == t_.end() ? R(0) : it->second;
  }
  R constant_term() const { return coeff(Exp(spec_.nvars, 0)); }

  void set_coeff(const Exp& e, const R& c) {
    if (static_cast<int>(e.size()) != spec_.nvars)
      throw std::invalid_argument("Series: exponent arity mismatch");
    if (!spec_.admits(e)) return;
    if (c == R(0))
      t_.erase(e);
    else
      t_[e] = c;
  }
  void add_coeff(const Exp& e, const R& c) {
    if (static_cast<int>(e.size()) != spec_.nvars)
      throw std::invalid_argument("Series: exponent arity mismatch");
    if (!spec_.admits(e)) return;
    auto it = t_.find(e);
    if (it == t_.end()) {
      if (!(c == R(0))) t_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == R(0)) t_.erase(it);
    }
  }

  Series& operator+=(const Series& o) {
    check_same(o);
    for (auto& [e, c] : o.t_) add_coeff(e, c);
    return *this;
  }
  Series& operator-=(const Series& o) {
    check_same(o);
    for (auto& [e, c] : o.t_) add_coeff(e, neg(c));
    return *this;
  }
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator-(const Series& a) {
    Series r(a.spec_);
    for (auto& [e, c] : a.t_) r.t_.emplace(e, neg(c));
    return r;
  }
  friend Series operator*(const Series& a, const Series& b) {
    a.check_same(b);
    Series r(a.spec_);
    Exp e(a.spec_.nvars);
    for (auto& [ea, ca] : a.t_)
      for (auto& [eb, cb] : b.t_) {
        bool ok = true;
        for (int i = 0; i < a.spec_.nvars; ++i) {
          e[i] = ea[i] + eb[i];
          if (e[i] > a.spec_.caps[i]) {
            ok = false;
            break;
          }
        }
        if (ok && (a.spec_.total_cap < 0 || a.spec_.weight_of(e) <= a.spec_.total_cap))
          r.add_coeff(e, ca * cb);
      }
    return r;
  }
  Series& operator*=(const Series& o) { return *this = *this * o; }
  Series scaled(const R& c) const {
    Series r(spec_);
    for (auto& [e, v] : t_) r.add_coeff(e, v * c);
    return r;
  }
  friend bool operator==(const Series& a, const Series& b) {
    a.check_same(b);
    return a.t_ == b.t_;
  }
  friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

  Series pow(long n) const {
    Series acc = one(spec_), base = *this;
    while (n) {
      if (n & 1) acc *= base;
      if (n >>= 1) base *= base;
    }
    return acc;
  }

  /// Multiplicative inverse; requires an invertible constant term.
  Series inverse() const {
    R c0 = constant_term();
    if (c0 == R(0)) throw std::domain_error("Series::inverse: zero constant term");
    R c0inv = inv(c0);
    // X = 1 - f/c0 is topologically nilpotent; 1/f = c0inv * sum X^k.
    Series x = one(spec_) - scaled(c0inv);
    Series acc = one(spec_), p = one(spec_);
    long order = max_order();
    for (long k = 1; k <= order; ++k) {
      p *= x;
      if (p.is_zero()) break;
      acc += p;
    }
    return acc.scaled(c0inv);
  }

  /// exp of a series with zero constant term.
  Series exp() const {
    if (!(constant_term() == R(0))) throw std::domain_error("Series::exp: nonzero constant term");
    Series acc = one(spec_), p = one(spec_);
    long order = max_order();
    Rat fact = 1;
    for (long k = 1; k <= order; ++k) {
      p *= *this;
      if (p.is_zero()) break;
      fact *= k;
      acc += p.scaled(R(Rat(1) / fact));
    }
    return acc;
  }

  /// log of a series with constant term 1.
  Series log() const {
    if (!(constant_term() == R(1))) throw std::domain_error("Series::log: constant term != 1");
    Series x = *this - one(spec_);
    Series acc(spec_), p = one(spec_);
    long order = max_order();
    for (long k = 1; k <= order; ++k) {
      p *= x;
      if (p.is_zero()) break;
      Rat sign = (k % 2 == 1) ? Rat(1) : Rat(-1);
      acc += p.scaled(R(sign / Rat(k)));
    }
    return acc;
  }

  /// f^{alpha} for scalar alpha (binomial series); constant term must be 1.
  Series pow_scalar(const R& alpha) const {
    return log().scaled(alpha).exp();
  }

  /// Substitute variable i -> subs[i]; all subs share one target contract.
  /// Every substituted series must have zero constant term unless the
  /// corresponding variable never appears... (general case handled by powers).
  Series compose(const std::vector<Series>& subs) const {
    if (static_cast<int>(subs.size()) != spec_.nvars)
      throw std::invalid_argument("Series::compose: arity mismatch");
    const SeriesSpec& target = subs.empty() ? spec_ : subs[0].spec_;
    for (auto& s : subs)
      if (!(s.spec() == target)) throw std::invalid_argument("compose: mixed contracts");
    // Memoized powers of each substituted series.
    std::vector<std::vector<Series>> pows(spec_.nvars);
    for (int i = 0; i < spec_.nvars; ++i) pows[i].push_back(one(target));
    Series r(target);
    for (auto& [e, c] : t_) {
      Series m = one(target);
      for (int i = 0; i < spec_.nvars; ++i) {
        while (static_cast<int>(pows[i].size()) <= e[i])
          pows[i].push_back(pows[i].back() * subs[i]);
        if (e[i] > 0) m *= pows[i][e[i]];
      }
      r += m.scaled(c);
    }
    return r;
  }

  /// Map coefficients through an arbitrary function into a new ring.
  template <class S, class F>
  Series<S> map_coeffs(F&& f) const {
    Series<S> r(spec_);
    for (auto& [e, c] : t_) r.add_coeff(e, f(c));
    return r;
  }

  /// Rescale variable i by a scalar: t_i -> c * t_i.
  Series scale_variable(int i, const R& c) const {
    Series r(spec_);
    R p = R(1);
    std::map<int, R> powers{{0, R(1)}};
    for (auto& [e, v] : t_) {
      auto it = powers.find(e[i]);
      if (it == powers.end()) {
        R acc = R(1);
        for (int k = 0; k < e[i]; ++k) acc *= c;
        it = powers.emplace(e[i], acc).first;
      }
      r.add_coeff(e, v * it->second);
    }
    return r;
  }

  /// t_i -> -t_i for all i in `which`.
  Series negate_variables(const std::vector<int>& which) const {
    Series r(spec_);
    for (auto& [e, v] : t_) {
      long s = 0;
      for (int i : which) s += e[i];
      r.add_coeff(e, (s % 2 == 0) ? v : neg(v));
    }
    return r;
  }

  /// t_i -> t_i^2 (throws if the doubled exponent violates the caps... it is
  /// simply truncated, consistent with the contract).
  Series square_variables() const {
    Series r(spec_);
    Exp e2(spec_.nvars);
    for (auto& [e, v] : t_) {
      for (int i = 0; i < spec_.nvars; ++i) e2[i] = 2 * e[i];
      r.add_coeff(e2, v);
    }
    return r;
  }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : t_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << coeff_str(c) << ")";
      for (int i = 0; i < spec_.nvars; ++i)
        if (e[i]) {
          os << "*" << (spec_.names.empty() ? "t" + std::to_string(i + 1) : spec_.names[i]);
          if (e[i] > 1) os << "^" << e[i];
        }
    }
    return first ? "0" : os.str();
  }

 private:
  template <class T>
  static std::string coeff_str(const T& c) {
    return c.to_string();
  }
  static std::string coeff_str(const Rat& c) { return c.get_str(); }

  long max_order() const {
    long m = 0;
    for (int i = 0; i < spec_.nvars; ++i) m += spec_.caps[i];
    if (spec_.total_cap >= 0) m = std::min(m, spec_.total_cap);
    return m;
  }
  static R neg(const R& c) { return R(0) - c; }
  static R inv(const R& c) {
    if constexpr (requires(const R& a, const R& b) { a / b; }) {
      return R(1) / c;
    } else {
      return ring_inverse(c);  // ADL hook for rings with partial inversion
    }
  }
  void check_same(const Series& o) const {
    if (!(spec_ == o.spec_)) throw std::invalid_argument("Series: contract mismatch");
  }

  SeriesSpec spec_;
  Map t_;
};

}  // namespace qmds
