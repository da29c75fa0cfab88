#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "gaptrack/special_functions.hpp"
#include "gaptrack/stats.hpp"

using namespace gaptrack;
using Catch::Approx;

// Reference values in this file were computed once with scipy 1.11
// (stats.t.sf, stats.f.sf, stats.chi2.sf, stats.pearsonr, stats.spearmanr,
// stats.f_oneway, stats.ttest_ind, stats.kruskal) and frozen.

TEST_CASE("student t upper tail matches reference values") {
  CHECK(student_t_sf(1.96, 1e6) == Approx(0.024998033792634891).margin(1e-9));
  CHECK(student_t_sf(2.0, 5) == Approx(0.05096973941492914).margin(1e-10));
  CHECK(student_t_sf(1.5, 7) == Approx(0.088649243494985014).margin(1e-10));
  CHECK(student_t_sf(2.5, 30) == Approx(0.009057824534033353).margin(1e-10));
  CHECK(student_t_sf(0.0, 3) == Approx(0.5).margin(1e-12));
  CHECK(student_t_sf(-1.2, 9) == Approx(0.86961340130476916).margin(1e-10));
  CHECK(student_t_sf(4.0, 1) == Approx(0.077979130377369324).margin(1e-10));
  CHECK_THROWS_AS(student_t_sf(1.0, 0.0), ValidationError);
}

TEST_CASE("fisher F upper tail matches reference values") {
  CHECK(fisher_f_sf(8.25, 2, 64) == Approx(0.0006490691917512433).margin(1e-10));
  CHECK(fisher_f_sf(3.5, 4, 10) == Approx(0.049188140324931427).margin(1e-10));
  CHECK(fisher_f_sf(0.5, 2, 2) == Approx(2.0 / 3.0).margin(1e-10));
  CHECK(fisher_f_sf(1.0, 1, 1) == Approx(0.5).margin(1e-10));
  CHECK(fisher_f_sf(12.7, 3, 8) == Approx(0.0020708268082236742).margin(1e-10));
  CHECK(fisher_f_sf(0.0, 3, 5) == 1.0);
}

TEST_CASE("chi-square upper tail matches reference values") {
  CHECK(chi_square_sf(11.89, 2) == Approx(0.0026189023483632933).margin(1e-10));
  CHECK(chi_square_sf(5.0, 3) == Approx(0.17179714429673351).margin(1e-10));
  CHECK(chi_square_sf(1.0, 1) == Approx(0.31731050786291115).margin(1e-10));
  CHECK(chi_square_sf(0.0, 4) == 1.0);
  CHECK(chi_square_sf(27.5, 10) == Approx(0.0021694774053988828).margin(1e-10));
}

TEST_CASE("upper tails are monotone decreasing in the statistic") {
  double prev_t = 1.0, prev_f = 1.0, prev_c = 1.0;
  for (double x = 0.0; x <= 10.0; x += 0.5) {
    const double pt = student_t_sf(x, 7);
    const double pf = fisher_f_sf(x, 3, 12);
    const double pc = chi_square_sf(x, 4);
    CHECK(pt <= prev_t);
    CHECK(pf <= prev_f);
    CHECK(pc <= prev_c);
    CHECK((pt >= 0.0 && pt <= 1.0));
    CHECK((pf >= 0.0 && pf <= 1.0));
    CHECK((pc >= 0.0 && pc <= 1.0));
    prev_t = pt;
    prev_f = pf;
    prev_c = pc;
  }
}

TEST_CASE("pearson handles exact linear relations") {
  std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y, neg;
  for (double v : x) {
    y.push_back(2.0 * v + 1.0);
    neg.push_back(-v);
  }
  CHECK(pearson(x, y) == Approx(1.0).margin(1e-12));
  CHECK(pearson(x, neg) == Approx(-1.0).margin(1e-12));
  CHECK_THROWS_AS(pearson(x, {1, 1, 1, 1, 1}), ValidationError);
  CHECK_THROWS_AS(pearson(x, {1, 2}), ValidationError);
}

TEST_CASE("pearson matches a frozen reference and its symmetries") {
  std::vector<double> xs = {0.5, 1.2, -0.3, 2.2, 1.9, 0.0, 3.3, -1.1};
  std::vector<double> ys = {1.0, 0.3, 0.9, 2.5, 1.8, 0.2, 2.9, -0.7};
  const double r = pearson(xs, ys);
  CHECK(r == Approx(0.904630256118554).margin(1e-12));
  CHECK(pearson(ys, xs) == Approx(r).margin(1e-14));

  std::vector<double> affine;
  for (double v : xs) affine.push_back(3.0 * v - 7.0);
  CHECK(pearson(affine, ys) == Approx(r).margin(1e-12));

  std::vector<double> flipped;
  for (double v : xs) flipped.push_back(-2.0 * v);
  CHECK(pearson(flipped, ys) == Approx(-r).margin(1e-12));
}

TEST_CASE("spearman ranks with ties and monotone invariance") {
  std::vector<double> x = {1, 2, 2, 3};
  std::vector<double> y = {3, 1, 2, 2};
  CHECK(spearman(x, y) == Approx(-0.5).margin(1e-12));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> a(12), b(12);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
  }
  const double base = spearman(a, b);
  std::vector<double> warped;
  for (double v : a) warped.push_back(std::exp(v) + v * v * v);  // strictly increasing
  CHECK(spearman(warped, b) == Approx(base).margin(1e-12));

  std::vector<double> mono;
  for (double v : a) mono.push_back(std::exp(v));
  CHECK(spearman(a, mono) == Approx(1.0).margin(1e-12));
  std::vector<double> rev(a.rbegin(), a.rend());
  std::vector<double> sorted_a = a;
  std::sort(sorted_a.begin(), sorted_a.end());
  std::vector<double> sorted_desc(sorted_a.rbegin(), sorted_a.rend());
  CHECK(spearman(sorted_a, sorted_desc) == Approx(-1.0).margin(1e-12));
}

TEST_CASE("one-way ANOVA matches the hand-computed textbook case") {
  GroupedSamples groups = {{"g1", {64, 72, 68, 77, 56}},
                           {"g2", {78, 91, 97, 82, 85}},
                           {"g3", {75, 93, 78, 71, 63}}};
  TestResult r = one_way_anova(groups);
  // SSB = 924.9333..., SSW = 968.4, df = (2, 12).
  CHECK(r.statistic == Approx(5.730689797604298).margin(1e-9));
  CHECK(r.df1 == 2.0);
  CHECK(r.df2 == 12.0);
  CHECK(r.p_value == Approx(0.017904664958197074).margin(1e-9));
}

TEST_CASE("one-way ANOVA degenerate and invariance cases") {
  GroupedSamples same = {{"a", {5, 6, 7}}, {"b", {5, 6, 7}}, {"c", {5, 6, 7}}};
  TestResult r = one_way_anova(same);
  CHECK(r.statistic == Approx(0.0).margin(1e-12));
  CHECK(r.p_value == Approx(1.0).margin(1e-12));

  GroupedSamples constant = {{"a", {4, 4}}, {"b", {4, 4}}};
  CHECK_THROWS_AS(one_way_anova(constant), ValidationError);

  GroupedSamples base = {{"a", {1.0, 2.5, 3.0}}, {"b", {2.0, 4.0, 5.5, 6.0}}};
  const double f0 = one_way_anova(base).statistic;
  GroupedSamples moved = base;
  for (auto& g : moved) {
    for (auto& v : g.values) v = 3.0 * v + 11.0;
  }
  CHECK(one_way_anova(moved).statistic == Approx(f0).margin(1e-9));
}

TEST_CASE("two-sample t matches frozen Welch and pooled references") {
  std::vector<double> a = {1, 2, 3, 4};
  std::vector<double> b = {2, 4, 6, 9};
  TestResult welch = two_sample_t(a, b);
  CHECK(welch.statistic == Approx(-1.690641214609248).margin(1e-9));
  CHECK(welch.df1 == Approx(4.0836357498523075).margin(1e-9));
  CHECK(welch.p_value == Approx(0.1647020796280566).margin(1e-9));

  TestResult pooled = two_sample_t(a, b, true);
  CHECK(pooled.statistic == Approx(-1.690641214609248).margin(1e-9));
  CHECK(pooled.df1 == 6.0);
  CHECK(pooled.p_value == Approx(0.14186036028585047).margin(1e-9));
}

TEST_CASE("two-sample t degenerate cases") {
  std::vector<double> a = {3, 5, 7, 9};
  TestResult self = two_sample_t(a, a);
  CHECK(self.statistic == Approx(0.0).margin(1e-12));
  CHECK(self.p_value == Approx(1.0).margin(1e-12));

  // Shifted copy keeps the variances equal, so Welch and pooled agree.
  std::vector<double> shifted;
  for (double v : a) shifted.push_back(v + 5.0);
  TestResult w = two_sample_t(a, shifted);
  TestResult p = two_sample_t(a, shifted, true);
  CHECK(w.statistic == Approx(p.statistic).margin(1e-9));
  CHECK(w.df1 == Approx(p.df1).margin(1e-9));
  CHECK(w.p_value == Approx(p.p_value).margin(1e-9));

  CHECK_THROWS_AS(two_sample_t({2, 2, 2}, {2, 2}), ValidationError);
  TestResult apart = two_sample_t({2, 2, 2}, {5, 5});
  CHECK(std::isinf(apart.statistic));
  CHECK(apart.p_value == 0.0);
  CHECK_THROWS_AS(two_sample_t({1}, {1, 2}), ValidationError);
}

TEST_CASE("kruskal-wallis matches frozen references with and without ties") {
  GroupedSamples plain = {{"a", {1, 3, 5}}, {"b", {2, 4, 6}}, {"c", {10, 11, 12}}};
  TestResult r = kruskal_wallis(plain);
  CHECK(r.statistic == Approx(5.600000000000001).margin(1e-9));
  CHECK(r.df1 == 2.0);
  CHECK(r.p_value == Approx(0.06081006262521791).margin(1e-9));

  GroupedSamples tied = {{"a", {1, 2, 2, 4}}, {"b", {2, 5, 6}}};
  TestResult rt = kruskal_wallis(tied);
  CHECK(rt.statistic == Approx(2.1538461538461497).margin(1e-9));
  CHECK(rt.p_value == Approx(0.14221324193638876).margin(1e-9));
}

TEST_CASE("kruskal-wallis degenerate and invariance cases") {
  GroupedSamples identical = {{"a", {7, 7, 7}}, {"b", {7, 7, 7}}};
  TestResult r = kruskal_wallis(identical);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);

  GroupedSamples base = {{"a", {1.0, 2.0, 8.0}}, {"b", {3.0, 4.0, 9.0}}};
  const double h0 = kruskal_wallis(base).statistic;
  GroupedSamples warped = base;
  for (auto& g : warped) {
    for (auto& v : g.values) v = std::exp(v);  // strictly increasing map
  }
  CHECK(kruskal_wallis(warped).statistic == Approx(h0).margin(1e-12));

  CHECK_THROWS_AS(kruskal_wallis({{"a", {1, 2}}, {"b", {3, 4}}}), ValidationError);
}

TEST_CASE("incomplete beta and gamma validate their domains") {
  CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), ValidationError);
  CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), ValidationError);
  CHECK_THROWS_AS(regularized_gamma_p(-1.0, 0.5), ValidationError);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  // I_x(1,1) is the identity.
  for (double x : {0.1, 0.25, 0.5, 0.9}) {
    CHECK(regularized_incomplete_beta(1.0, 1.0, x) == Approx(x).margin(1e-12));
  }
  // P + Q = 1.
  for (double x : {0.2, 1.0, 3.7, 10.0}) {
    CHECK(regularized_gamma_p(2.5, x) + regularized_gamma_q(2.5, x) ==
          Approx(1.0).margin(1e-12));
  }
}
