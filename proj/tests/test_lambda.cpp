/**
 * @file test_lambda.cpp
 * @brief The series coefficients lambda(kappa, l; q) for l <= 4: closed forms
 *        against their dual recurrence routes, the r <= 3 rational-function
 *        oracle, the brute-force Dirichlet-series identity, and the exact
 *        functional-equation checks.
 */
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "qmds/lambda.hpp"

using namespace qmds;

namespace {

WeilElement qp(int e, long c = 1) { return w_qpow(e, Rat(c)); }

/// All canonical kappa (descending parts) of total weight <= wmax.
std::vector<Kappa> partitions_up_to(int wmax) {
  std::vector<Kappa> out{{}};
  std::function<void(Kappa&, int, int)> rec = [&](Kappa& cur, int rem, int maxpart) {
    for (int p = std::min(rem, maxpart); p >= 1; --p) {
      cur.push_back(p);
      out.push_back(cur);
      rec(cur, rem - p, p);
      cur.pop_back();
    }
  };
  Kappa cur;
  for (int w = 1; w <= wmax; ++w) rec(cur, w, w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rat hecke_at_3(int sym) {
  if (sym == 6) return Rat(252);  // T_12(3)
  REQUIRE(sym >= 2);
  REQUIRE(sym <= 5);
  return Rat(0);  // T_4..T_10 vanish identically
}

}  // namespace

TEST_CASE("lambda(kappa, 2): pinned values") {
  CHECK(lambda_l2({}) == qp(2));
  CHECK(lambda_l2({1}).is_zero());
  CHECK(lambda_l2({2}) == qp(3));
  CHECK(lambda_l2({3}) == qp(4));
  CHECK(lambda_l2({4}) == qp(5));
  CHECK(lambda_l2({2, 1}) == qp(4));
  CHECK(lambda_l2({2, 2}) == qp(5) + qp(4));
  CHECK(lambda_l2({3, 2, 1}) == qp(7) + qp(6, 2));
  CHECK(lambda_l2({1, 1, 1, 1, 1, 1}) == qp(7) + qp(6, 9) + qp(5, 5));
}

TEST_CASE("lambda(kappa, 2): dual route through the closed form on all-ones tuples") {
  for (int r = 0; r <= 8; ++r) CHECK(lambda_l2(Kappa(r, 1)) == lambda_l2_ones(r));
}

TEST_CASE("lambda(kappa, 2): symmetry, degree bound and q-divisibility") {
  CHECK(lambda_l2({1, 2}) == lambda_l2({2, 1}));
  CHECK(lambda_l2({1, 3, 2}) == lambda_l2({3, 2, 1}));
  for (const Kappa& k : partitions_up_to(7)) {
    WeilElement v = lambda_l2(k);
    REQUIRE(v.is_laurent());
    if (v.is_zero()) continue;
    int w = kappa_weight(k);
    LaurentQ p = v.as_laurent();
    CHECK(p.max_e2() <= 2 * (w + 2));
    CHECK(p.min_e2() >= 2 * ((w + 1) / 2 + 2));
  }
}

TEST_CASE("lambda(kappa, 3): pinned values and support") {
  CHECK(lambda_l3({1, 1}) == qp(4) - WeilElement::monomial(1, 4, 2));
  CHECK(lambda_l3(Kappa(10, 1)).drop_trivial_symbols() ==
        qp(8, 42) - WeilElement::monomial(1, 4, 6));
  CHECK(lambda_l3({1}).is_zero());
  CHECK(lambda_l3({3}).is_zero());          // a part outside {1, 2}
  CHECK(lambda_l3({2, 1}).is_zero());       // odd number of ones
  CHECK(lambda_l3({2}) == qp(4));
  CHECK(lambda_l3({2, 2}) == qp(5));
  for (const Kappa& k : partitions_up_to(7))
    if (kappa_weight(k) % 2) CHECK(lambda_l3(k).is_zero());
}

TEST_CASE("lambda(kappa, 3): closed form agrees with the dominance recurrence") {
  for (const Kappa& k : partitions_up_to(8)) {
    INFO("kappa weight " << kappa_weight(k));
    CHECK(lambda_l3(k) == lambda_l3_recurrence(k));
  }
}

TEST_CASE("third-moment prime sum is antisymmetric under the Weil involution") {
  for (const Kappa& k : partitions_up_to(8)) {
    WeilElement a = a3_weil(k);
    CHECK(a == -(w_qpow(kappa_weight(k) + 4) * a.sigma()));
  }
}

TEST_CASE("lambda((1,1), 3; 3) evaluates to 81") {
  CHECK(lambda_l3({1, 1}).eval(Rat(3), hecke_at_3) == Rat(81));
}

TEST_CASE("rational-function oracle: r = 1 and r = 2 basics") {
  SeriesSpec s1 = SeriesSpec::uniform(2, 6);
  for (int l = 0; l <= 6; ++l) CHECK(oracle_lambda(1, {0}, l, s1) == LaurentQ::q_pow(l));
  CHECK(oracle_lambda(1, {1}, 1, s1).is_zero());
  CHECK(oracle_lambda(1, {2}, 2, s1) == LaurentQ::q_pow(3));
  for (int k = 1; k <= 6; ++k) {
    CHECK(oracle_lambda(1, {k}, 0, s1) == LaurentQ::q_pow(k));
    CHECK(oracle_lambda(1, {k}, 1, s1).is_zero());
  }
  SeriesSpec s2 = SeriesSpec::uniform(3, 4);
  CHECK(oracle_lambda(2, {1, 1}, 2, s2) == LaurentQ::q_pow(3));
  CHECK(oracle_lambda(2, {1, 1}, 1, s2).is_zero());
}

TEST_CASE("rational-function oracle matches lambda_l2 and lambda_l3 for r <= 2") {
  SeriesSpec s1 = SeriesSpec::uniform(2, 6);
  for (int k = 0; k <= 6; ++k) {
    CHECK(oracle_lambda(1, {k}, 2, s1) == lambda_l2({k}).as_laurent());
    if (k <= 3) CHECK(oracle_lambda(1, {k}, 3, s1) == lambda_l3({k}).drop_trivial_symbols().as_laurent());
  }
  SeriesSpec s2 = SeriesSpec::uniform(3, 4);
  for (int k1 = 0; k1 <= 4; ++k1)
    for (int k2 = 0; k2 <= 4; ++k2) {
      Kappa k = kappa_sorted({k1, k2});
      CHECK(oracle_lambda(2, {k1, k2}, 2, s2) == lambda_l2(k).as_laurent());
      CHECK(oracle_lambda(2, {k1, k2}, 3, s2) == lambda_l3(k).drop_trivial_symbols().as_laurent());
    }
}

TEST_CASE("rational-function oracle: r = 3 data file matches the closed forms") {
  SeriesSpec s3;
  s3.nvars = 4;
  s3.caps = {2, 2, 2, 4};
  Series<LaurentQ> Z = oracle_rational_function(3, s3);
  for (int k1 = 0; k1 <= 2; ++k1)
    for (int k2 = 0; k2 <= 2; ++k2)
      for (int k3 = 0; k3 <= 2; ++k3) {
        Kappa k = kappa_sorted({k1, k2, k3});
        CHECK(Z.coeff({k1, k2, k3, 2}) == lambda_l2(k).as_laurent());
        CHECK(Z.coeff({k1, k2, k3, 3}) == lambda_l3(k).drop_trivial_symbols().as_laurent());
        CHECK(Z.coeff({k1, k2, k3, 0}) == LaurentQ::q_pow(k1 + k2 + k3));
      }
  for (int l = 0; l <= 4; ++l) CHECK(Z.coeff({0, 0, 0, l}) == LaurentQ::q_pow(l));
}

TEST_CASE("rational-function data file: checksum mismatch is detected") {
  std::string damaged = std::string(QMDS_DATA_DIR) + "/.damaged_r3.tmp";
  {
    std::ifstream in(std::string(QMDS_DATA_DIR) + "/mds_rational_r3.dat");
    REQUIRE(in.good());
    std::ostringstream all;
    all << in.rdbuf();
    std::string text = all.str();
    auto pos = text.rfind("18");  // perturb one numerator exponent
    REQUIRE(pos != std::string::npos);
    text[pos] = '7';
    std::ofstream out(damaged);
    out << text;
  }
  CHECK_THROWS_AS(load_rational_r3(damaged), std::runtime_error);
  std::remove(damaged.c_str());
  CHECK_THROWS_AS(load_rational_r3("/nonexistent/file.dat"), std::runtime_error);
}

TEST_CASE("fourth-moment assembly satisfies its functional equation") {
  SeriesSpec spec = SeriesSpec::uniform(2, 3);
  A4Assembly a = assemble_A4(spec);
  CHECK(a4_functional_equation_holds(a.gamma_times_a4));
  // and a deliberately damaged series does not
  Series<WeilElement> bad = a.gamma_times_a4;
  bad.add_coeff({1, 0}, WeilElement(1));
  CHECK_FALSE(a4_functional_equation_holds(bad));
}

TEST_CASE("lambda(kappa, 4): pinned values") {
  CHECK(lambda_l4({}) == qp(4));
  auto T4 = [](int e, long c) { return WeilElement::monomial(Rat(c), 2 * e, 2); };
  CHECK(lambda_l4({1, 1}) == qp(5) - T4(3, 1));
  CHECK(lambda_l4({2, 1}) == -T4(3, 2));
  CHECK(lambda_l4({2, 2}) == qp(6, 2) - T4(4, 2));
  CHECK(lambda_l4({3, 3}) == qp(8) + qp(7) - T4(6, 2) - T4(5, 3));
  CHECK(lambda_l4({4}) == qp(6) - T4(4, 1));
  CHECK(lambda_l4({6}) == qp(8) - T4(6, 1));
}

TEST_CASE("lambda(kappa, 4) matches the r <= 3 rational-function oracle") {
  SeriesSpec s1 = SeriesSpec::uniform(2, 4);
  auto t1 = lambda_l4_table({4});
  for (int k = 0; k <= 4; ++k)
    CHECK(t1.at({k}).drop_trivial_symbols().as_laurent() == oracle_lambda(1, {k}, 4, s1));
  SeriesSpec s2;
  s2.nvars = 3;
  s2.caps = {3, 3, 4};
  auto t2 = lambda_l4_table({3, 3});
  for (int k1 = 0; k1 <= 3; ++k1)
    for (int k2 = 0; k2 <= 3; ++k2)
      CHECK(t2.at({k1, k2}).drop_trivial_symbols().as_laurent() ==
            oracle_lambda(2, {k1, k2}, 4, s2));
  SeriesSpec s3;
  s3.nvars = 4;
  s3.caps = {2, 2, 2, 4};
  Series<LaurentQ> Z3 = oracle_rational_function(3, s3);
  auto t3 = lambda_l4_table({2, 2, 2});
  for (int k1 = 0; k1 <= 2; ++k1)
    for (int k2 = 0; k2 <= 2; ++k2)
      for (int k3 = 0; k3 <= 2; ++k3)
        CHECK(t3.at({k1, k2, k3}).drop_trivial_symbols().as_laurent() ==
              Z3.coeff({k1, k2, k3, 4}));
}

TEST_CASE("lambda(kappa, 4): numeric evaluations at q = 3") {
  CHECK(lambda_l4({1, 1}).eval(Rat(3), hecke_at_3) == Rat(243));
  CHECK(lambda_l4({2, 2}).eval(Rat(3), hecke_at_3) == Rat(1458));
}

TEST_CASE("lambda(kappa, 4): shape violations are rejected") {
  // weight 0 requires the symbol-free part divisible by q^3
  CHECK_THROWS_AS(check_lambda4_shape({}, w_qpow(1)), std::domain_error);
  // degree bound: weight 0 allows at most q^4
  CHECK_THROWS_AS(check_lambda4_shape({}, w_qpow(9)), std::domain_error);
  CHECK_NOTHROW(check_lambda4_shape({}, w_qpow(4)));
}

TEST_CASE("LambdaTable: defining invariants and symmetry") {
  LambdaTable tab(2, {2, 2}, 4);
  for (int k1 = 0; k1 <= 2; ++k1)
    for (int k2 = 0; k2 <= 2; ++k2) {
      Kappa k{k1, k2};
      CHECK(tab.value(k, 0) == qp(k1 + k2));
      if (k1 + k2 == 0)
        CHECK(tab.value(k, 1) == qp(1));
      else
        CHECK(tab.value(k, 1).is_zero());
      CHECK(tab.value(k, 2) == lambda_l2(kappa_sorted(k)));
      CHECK(tab.value(k, 3) == lambda_l3(kappa_sorted(k)));
      CHECK(tab.value({k1, k2}, 4) == tab.value({k2, k1}, 4));
    }
  CHECK(tab.value({0, 0}, 4) == qp(4));
  CHECK(tab.value({1, 1}, 4) == lambda_l4({1, 1}));
  CHECK_THROWS_AS(tab.value({5, 5}, 2), std::out_of_range);
}

TEST_CASE("brute force over F_3[x] reproduces lambda(kappa, l; 3)") {
  CHECK(brute_force_lambda({}, 1, 3) == Rat(3));
  CHECK(brute_force_lambda({1}, 0, 3) == Rat(3));
  CHECK(brute_force_lambda({1}, 2, 3) == Rat(0));
  CHECK(brute_force_lambda({0}, 2, 3) == Rat(9));
  CHECK(brute_force_lambda({2}, 2, 3) == Rat(27));
  CHECK(brute_force_lambda({1, 1}, 2, 3) == Rat(27));
  CHECK(brute_force_lambda({2, 1}, 2, 3) == Rat(81));
  CHECK(brute_force_lambda({1, 1}, 3, 3) == Rat(81));
  CHECK(brute_force_lambda({3}, 3, 3) == Rat(0));
  // consistency with the closed forms evaluated at q = 3
  CHECK(brute_force_lambda({2}, 2, 3) == lambda_l2({2}).eval(Rat(3), hecke_at_3));
  CHECK(brute_force_lambda({1, 1}, 3, 3) == lambda_l3({1, 1}).eval(Rat(3), hecke_at_3));
}

TEST_CASE("functional equations: r = 1 over a grid exceeding the cleared degrees") {
  FunctionalEquationReport rep = functional_equations_r_le_3(1, 9, {14, 14});
  INFO(rep.first_failure);
  CHECK(rep.ok);
  CHECK(rep.points_checked == 15 * 15);
  CHECK(rep.points_skipped == 0);
  CHECK(rep.coeffs_checked > 100);
}

TEST_CASE("functional equations: r = 2") {
  FunctionalEquationReport rep = functional_equations_r_le_3(2, 9, {4, 4, 5});
  INFO(rep.first_failure);
  CHECK(rep.ok);
  CHECK(rep.points_checked == 5 * 5 * 6);
  CHECK(rep.points_skipped == 0);
}

TEST_CASE("functional equations: r = 3 (truncated)") {
  FunctionalEquationReport rep = functional_equations_r_le_3(3, 9, {2, 2, 2, 4});
  INFO(rep.first_failure);
  CHECK(rep.ok);
  CHECK(rep.points_checked == 27 * 5);
  CHECK(rep.points_skipped == 0);
}

TEST_CASE("functional equations: another square base, and rejected bases") {
  FunctionalEquationReport rep = functional_equations_r_le_3(1, 25, {6, 6});
  INFO(rep.first_failure);
  CHECK(rep.ok);
  CHECK_THROWS_AS(functional_equations_r_le_3(1, 8, {4, 4}), std::invalid_argument);
  CHECK_THROWS_AS(functional_equations_r_le_3(1, 10, {4, 4}), std::invalid_argument);
  CHECK_THROWS_AS(functional_equations_r_le_3(4, 9, {1, 1, 1, 1, 1}), std::invalid_argument);
}
