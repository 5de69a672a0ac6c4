// Exact coefficient rings: Laurent polynomials in q^{1/2}, rational
// functions in q, the Hecke-symbol ring, and truncated multivariate series.
#include <catch2/catch_amalgamated.hpp>

#include "qmds/laurent.hpp"
#include "qmds/qrat.hpp"
#include "qmds/series.hpp"
#include "qmds/weil.hpp"

using namespace qmds;

TEST_CASE("LaurentQ basic arithmetic and half powers") {
  LaurentQ q = LaurentQ::q_pow(1);
  LaurentQ s = LaurentQ::q_half_pow(1);  // q^{1/2}
  CHECK(s * s == q);
  CHECK((q + 1) * (q - 1) == q * q - 1);
  CHECK((q - 1).eval(Rat(7)) == 6);
  CHECK(s.eval_sqrt(Rat(3)) == 3);
  CHECK_THROWS_AS(s.eval(Rat(4)), std::domain_error);
  CHECK(LaurentQ::q_pow(-2).eval(Rat(2)) == Rat(1, 4));
}

TEST_CASE("LaurentQ substitution and exact division") {
  LaurentQ q = LaurentQ::q_pow(1);
  LaurentQ f = q * q * q - q;  // q^3 - q
  CHECK(f.invert_q() == LaurentQ::q_pow(-3) - LaurentQ::q_pow(-1));
  CHECK(f.subst_exponent(2) == LaurentQ::q_pow(6) - LaurentQ::q_pow(2));
  CHECK(f.divexact(q - 1) == q * q + q);
  CHECK(f.divexact(q) == q * q - 1);
  CHECK_THROWS_AS((q + 1).divexact(q - 1), std::domain_error);
}

TEST_CASE("QRat reduces to lowest terms") {
  QRat q = QRat::q_pow(1);
  QRat f = (q * q - 1) / (q - 1);
  CHECK(f.is_laurent());
  CHECK(f.as_laurent() == LaurentQ::q_pow(1) + 1);
  QRat g = QRat(1) / (q - 1) + QRat(1) / (q + 1);  // 2q/(q^2-1)
  CHECK(g.eval(Rat(3)) == Rat(3, 4));
  CHECK(g * (q * q - 1) == q + q);
  // q -> 1/q on a genuine rational function
  QRat h = q / (q + 1);
  CHECK(h.invert_q() == QRat(1) / (q + 1));
}

TEST_CASE("WeilElement weights, sigma, and guarded products") {
  // q^3 has weight 6; q^2 T_12 (symbol k=6) has weight 4 + 11 = 15.
  WeilElement a = WeilElement::monomial(1, 6, 0);
  WeilElement b = WeilElement::monomial(1, 4, 6);
  CHECK(WeilElement::term_weight({6, 0}) == 6);
  CHECK(WeilElement::term_weight({4, 6}) == 15);
  // sigma: q^3 -> q^{-3}; q^2 T_12 -> q^{-2} q^{-11} T_12 = q^{-13} T_12.
  CHECK(a.sigma() == WeilElement::monomial(1, -6, 0));
  CHECK(b.sigma() == WeilElement::monomial(1, -26, 6));
  CHECK(b.sigma().sigma() == b);
  // sigma pairs weight w with -w
  CHECK(WeilElement::term_weight(b.sigma().terms().begin()->first) == -15);
  // Products with at most one symbol factor are fine; two symbols throw.
  CHECK(a * b == WeilElement::monomial(1, 10, 6));
  CHECK_THROWS_AS(b * b, UnsupportedProductError);
}

TEST_CASE("WeilElement dominant part and boundary detection") {
  WeilElement w = WeilElement::monomial(1, 10, 0) + WeilElement::monomial(2, 6, 0) +
                  WeilElement::monomial(1, 2, 0);
  WeilElement dom = w.dominant_part(6);
  CHECK(dom == WeilElement::monomial(1, 10, 0));
  CHECK_THROWS_AS(w.dominant_part(6, /*forbid_boundary=*/true), BoundaryWeightError);
  CHECK(w.dominant_part(7, true) == WeilElement::monomial(1, 10, 0));
}

TEST_CASE("WeilElement trivial cusp-form symbols vanish") {
  WeilElement w = WeilElement::hecke(2) + WeilElement::hecke(5) + WeilElement::hecke(6);
  CHECK(w.drop_trivial_symbols() == WeilElement::hecke(6));
}

TEST_CASE("Series arithmetic, inverse, exp/log") {
  SeriesSpec spec = SeriesSpec::uniform(2, 5);
  auto t1 = Series<Rat>::variable(spec, 0), t2 = Series<Rat>::variable(spec, 1);
  auto one = Series<Rat>::one(spec);
  // geometric series
  auto g = (one - t1).inverse();
  CHECK(g.coeff({5, 0}) == 1);
  CHECK(g.coeff({4, 1}) == 0);
  CHECK((one - t1) * g == one);
  // exp(log(f)) == f
  auto f = one + t1 + t2 * t2;
  CHECK(f.log().exp() == f);
  // (1+t1)^{1/2} squared
  auto h = (one + t1).pow_scalar(Rat(1, 2));
  CHECK(h * h == one + t1);
}

TEST_CASE("Series composition") {
  SeriesSpec spec = SeriesSpec::uniform(1, 6);
  auto t = Series<Rat>::variable(spec, 0);
  auto one = Series<Rat>::one(spec);
  // f(t) = t/(1-t), g(t) = t/(1+t) are compositional inverses
  auto f = t * (one - t).inverse();
  auto g = t * (one + t).inverse();
  CHECK(f.compose({g}) == t);
  CHECK(g.compose({f}) == t);
}

TEST_CASE("Series with weighted total degree") {
  SeriesSpec spec;
  spec.nvars = 2;
  spec.caps = {10, 10};
  spec.weights = {1, 2};  // second variable counts double
  spec.total_cap = 4;
  auto x = Series<Rat>::variable(spec, 0), y = Series<Rat>::variable(spec, 1);
  auto one = Series<Rat>::one(spec);
  auto f = (one - x - y).inverse();
  CHECK(f.coeff({2, 1}) == 3);   // weight 4 kept: x^2 y has weight 4
  CHECK(f.coeff({3, 1}) == 0);   // weight 5 truncated
  CHECK(f.coeff({4, 0}) == 1);
}

TEST_CASE("Series over WeilElement coefficients") {
  SeriesSpec spec = SeriesSpec::uniform(1, 3);
  auto one = Series<WeilElement>::one(spec);
  Series<WeilElement> qt(spec);
  qt.set_coeff({1}, WeilElement::monomial(1, 2, 0));  // q*t
  auto g = (one - qt).inverse();                      // 1/(1-qt)
  CHECK(g.coeff({3}) == WeilElement::monomial(1, 6, 0));
}
