// Polynomials over F_q: square-freeness, factorization type, stratum
// enumeration, and irreducible counts.
#include <catch2/catch_amalgamated.hpp>

#include "qmds/polyspace.hpp"
#include "qmds/qrat.hpp"

using namespace qmds;

static Poly from_coeffs(const FiniteField& f, std::vector<long> c) {
  return Poly(f, std::move(c));
}

TEST_CASE("Square-freeness via gcd with the derivative") {
  const FiniteField& f3 = FieldRegistry::get(3, 1);
  CHECK(is_squarefree(from_coeffs(f3, {1, 2, 0, 1})));      // x^3 + 2x + 1
  CHECK_FALSE(is_squarefree(from_coeffs(f3, {0, 0, 1})));   // x^2
  CHECK(is_squarefree(from_coeffs(f3, {0, 2, 0, 1})));      // x^3 - x
  CHECK(is_squarefree(from_coeffs(f3, {1})));               // constants count
  CHECK(is_squarefree(from_coeffs(f3, {0, 1})));            // linear
  // x^3 + 2x^2 + x = x(x+1)^2 is not square-free
  CHECK_FALSE(is_squarefree(from_coeffs(f3, {0, 1, 2, 1})));
}

TEST_CASE("Irreducible counts match the Moebius formula") {
  // brute-force counts over F_3 (frozen from an independent enumeration):
  // Irr_3(1) = 3, Irr_3(2) = 3, Irr_3(3) = 8, Irr_3(4) = 18
  const FiniteField& f3 = FieldRegistry::get(3, 1);
  CHECK(IrreducibleCache::get(f3, 1).size() == 3);
  CHECK(IrreducibleCache::get(f3, 2).size() == 3);
  CHECK(IrreducibleCache::get(f3, 3).size() == 8);
  CHECK(IrreducibleCache::get(f3, 4).size() == 18);
  for (int m : {1, 2, 3, 4}) {
    CHECK(irr_count(3, m) == static_cast<long>(IrreducibleCache::get(f3, m).size()));
  }
  const FiniteField& f9 = FieldRegistry::get(3, 2);
  CHECK(irr_count(9, 2) == static_cast<long>(IrreducibleCache::get(f9, 2).size()));
}

TEST_CASE("Identity sum_{h|m} h Irr_q(h) = q^m symbolically") {
  for (int m = 1; m <= 30; ++m) {
    LaurentQ acc;
    for (int h = 1; h <= m; ++h)
      if (m % h == 0) acc += LaurentQ(Rat(h)) * irr_count_poly(h);
    CHECK(acc == LaurentQ::q_pow(m));
  }
}

TEST_CASE("Identity sum_{h|m} Irr_{1/q}(h) Irr_{q^h}(m/h) = 0 symbolically") {
  // Irr_{1/q}(h) substitutes q -> 1/q; Irr_{q^h}(m/h) substitutes q -> q^h.
  for (int m = 2; m <= 30; ++m) {
    LaurentQ acc;
    for (int h = 1; h <= m; ++h)
      if (m % h == 0)
        acc += irr_count_poly(h).invert_q() * irr_count_poly(m / h).subst_exponent(h);
    CHECK(acc == LaurentQ());
  }
}

TEST_CASE("Factorization types") {
  const FiniteField& f3 = FieldRegistry::get(3, 1);
  FactorType t1 = factor_type(from_coeffs(f3, {0, 2, 0, 1}));  // x^3 - x
  CHECK(t1 == FactorType{{1, 3}});
  FactorType t2 = factor_type(from_coeffs(f3, {1, 2, 0, 1}));  // irreducible cubic
  CHECK(t2 == FactorType{{3, 1}});
  FactorType t3 = factor_type(from_coeffs(f3, {0, 1, 0, 1}));  // x(x^2+1)
  CHECK(t3 == FactorType{{1, 1}, {2, 1}});
}

TEST_CASE("Stratum enumeration counts and contents") {
  const FiniteField& f3 = FieldRegistry::get(3, 1);
  // (1^3) over F_3: exactly C(3,3) = 1 polynomial, namely x^3 - x
  {
    std::vector<Poly> out;
    enumerate_stratum({{1, 3}}, f3, [&](const Poly& p) { out.push_back(p); });
    REQUIRE(out.size() == 1);
    CHECK(out[0] == from_coeffs(f3, {0, 2, 0, 1}));
  }
  // (3^1) over F_3: the 8 irreducible cubics
  {
    int n = 0;
    enumerate_stratum({{3, 1}}, f3, [&](const Poly& p) {
      CHECK(p.degree() == 3);
      CHECK(is_squarefree(p));
      ++n;
    });
    CHECK(n == 8);
  }
  // (1^n) over F_q has C(q, n) elements
  const FiniteField& f5 = FieldRegistry::get(5, 1);
  for (int n = 1; n <= 5; ++n) {
    long cnt = 0;
    enumerate_stratum({{1, n}}, f5, [&](const Poly&) { ++cnt; });
    Rat expect = binomial(5, n);
    CHECK(Rat(cnt) == expect);
  }
  // every output has the requested type and all are distinct
  {
    std::vector<Poly> out;
    enumerate_stratum({{1, 1}, {2, 1}}, f3, [&](const Poly& p) {
      CHECK(factor_type(p) == FactorType{{1, 1}, {2, 1}});
      out.push_back(p);
    });
    CHECK(out.size() == 9);  // 3 linear * 3 quadratic irreducibles
    std::sort(out.begin(), out.end());
    CHECK(std::adjacent_find(out.begin(), out.end()) == out.end());
  }
}

TEST_CASE("Total square-free count per degree: q^n - q^{n-1}") {
  for (auto [p, e] : {std::pair{3, 1}, {5, 1}, {7, 1}, {3, 2}}) {
    const FiniteField& f = FieldRegistry::get(p, e);
    int nmax = (f.q() <= 5) ? 6 : 4;
    for (int n = 2; n <= nmax; ++n) {
      // sum over all factor types of weight n
      long total = 0;
      // enumerate partitions of n into parts with multiplicities
      std::function<void(int, int, FactorType&)> parts = [&](int rem, int minpart,
                                                             FactorType& cur) {
        if (rem == 0) {
          enumerate_stratum(cur, f, [&](const Poly&) { ++total; });
          return;
        }
        for (int m = minpart; m <= rem; ++m) {
          cur[m]++;
          parts(rem - m, m, cur);
          if (--cur[m] == 0) cur.erase(m);
        }
      };
      FactorType cur;
      parts(n, 1, cur);
      long expect = 1;
      for (int i = 0; i < n - 1; ++i) expect *= f.q();
      expect *= (f.q() - 1);
      CHECK(total == expect);
    }
  }
}

TEST_CASE("Polynomial arithmetic spot checks") {
  const FiniteField& f3 = FieldRegistry::get(3, 1);
  Poly a = from_coeffs(f3, {1, 1});      // x + 1
  Poly b = from_coeffs(f3, {2, 1});      // x + 2
  Poly c = a * b;                        // x^2 + 2 (since 3 | 3x)
  CHECK(c == from_coeffs(f3, {2, 0, 1}));
  CHECK(Poly::gcd(c, a) == a);
  CHECK(c.mod(a).is_zero());
  CHECK(c.eval(1) == 0);
  CHECK(c.eval(0) == 2);
}
