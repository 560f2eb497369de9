// tests/test_scoring.cc

// Copyright 2026  The subspoof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "subspoof/fusion.h"
#include "subspoof/metrics.h"

using namespace subspoof;

namespace {

ScoreSet Make(const std::vector<double> &v, const std::string &prefix = "t") {
  ScoreSet s;
  for (std::size_t i = 0; i < v.size(); ++i) s.Add(prefix + std::to_string(i), v[i]);
  return s;
}

TdcfCostModel RandomCost(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    TdcfCostModel c;
    c.p_target = 0.5 + 0.49 * u(rng);
    c.p_nontarget = (1.0 - c.p_target) * u(rng);
    c.p_spoof = 1.0 - c.p_target - c.p_nontarget;
    if (!(c.p_spoof > 0.0 && c.p_nontarget > 0.0)) continue;
    c.c_miss_asv = 0.1 + 10 * u(rng);
    c.c_fa_asv = 0.1 + 10 * u(rng);
    c.c_miss_cm = 0.1 + 10 * u(rng);
    c.c_fa_cm = 0.1 + 10 * u(rng);
    c.p_miss_asv = 0.1 * u(rng);
    c.p_fa_asv = 0.1 * u(rng);
    c.p_miss_spoof_asv = 0.9 * u(rng);
    if (c.C1() > 0 && c.C2() > 0) return c;
  }
}

oracle::Costs ToOracle(const TdcfCostModel &c) {
  return {c.p_target,  c.p_nontarget, c.p_spoof,   c.c_miss_asv, c.c_fa_asv,
          c.c_miss_cm, c.c_fa_cm,     c.p_miss_asv, c.p_fa_asv,   c.p_miss_spoof_asv};
}

TdcfCostModel Balanced() {
  TdcfCostModel c;
  c.p_target = 0.5;
  c.p_nontarget = 0.25;
  c.p_spoof = 0.25;
  c.c_miss_asv = 1;
  c.c_fa_asv = 1;
  c.c_miss_cm = 1;
  c.c_fa_cm = 1;
  c.p_miss_asv = 0;
  c.p_fa_asv = 0;
  c.p_miss_spoof_asv = 0;
  return c;
}

}  // namespace

TEST_CASE("stage-1 fusion arithmetic and endpoints") {
  ScoreSet a = Make({0.4, -2.0, 7.125}), b = Make({0.8, 3.5, 1e-3});
  ScoreSet f = FuseStage1(a, b, 0.5);
  CHECK(f.At("t0").score == doctest::Approx(0.6));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(FuseStage1(a, b, 1.0).entries()[i].score == a.entries()[i].score);
    CHECK(FuseStage1(a, b, 0.0).entries()[i].score == b.entries()[i].score);
  }
}

TEST_CASE("stage-2 fusion fixed point and arithmetic") {
  ScoreSet q = Make({-1.0, 2.5}), r = Make({3.0, 2.5});
  for (double beta : {0.0, 0.3, 1.0}) CHECK(FuseStage2(q, q, beta).At("t1").score == 2.5);
  CHECK(FuseStage2(q, r, 0.5).At("t0").score == 1.0);
}

TEST_CASE("two-stage fusion equals the 0.25/0.25/0.5 closed form exactly") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 4.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> a(50), b(50), c(50);
    for (int i = 0; i < 50; ++i) a[i] = g(rng), b[i] = g(rng), c[i] = g(rng);
    ScoreSet f = FuseTwoStage(Make(a), Make(b), Make(c), FusionWeights{0.5, 0.5});
    for (int i = 0; i < 50; ++i) CHECK(f.entries()[i].score == (0.25 * a[i] + 0.25 * b[i]) + 0.5 * c[i]);
  }
}

TEST_CASE("fusion commutes with a common affine map") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> a(30), b(30), a2(30), b2(30);
  for (int i = 0; i < 30; ++i) {
    a[i] = g(rng), b[i] = g(rng);
    a2[i] = 2.5 * a[i] - 1.0;
    b2[i] = 2.5 * b[i] - 1.0;
  }
  ScoreSet f = FuseScores(Make(a), Make(b), 0.3), f2 = FuseScores(Make(a2), Make(b2), 0.3);
  for (int i = 0; i < 30; ++i)
    CHECK(f2.entries()[i].score == doctest::Approx(2.5 * f.entries()[i].score - 1.0).epsilon(1e-12));
}

TEST_CASE("fusion rejects mismatched trials and bad weights") {
  ScoreSet a = Make({1, 2}), b = Make({1, 2}, "u");
  CHECK_THROWS_WITH(FuseScores(a, b, 0.5), "trial t0 missing from second score set");
  ScoreSet c = Make({1, 2, 3});
  CHECK_THROWS_WITH(FuseScores(a, c, 0.5), "trial t2 missing from first score set");
  CHECK_THROWS_AS(FuseScores(a, a, 1.5), Error);
  CHECK_THROWS_AS(FuseScores(a, a, -0.1), Error);
  CHECK_THROWS_AS((FusionWeights{0.5, 2.0}.Validate()), Error);
}

TEST_CASE("EER on separated and identical sets") {
  std::vector<double> bona{0.9, 0.8}, spoof{0.1, 0.2};
  CHECK(ComputeEer(bona, spoof).eer == 0.0);
  std::vector<double> same{0.1, 0.5, 0.9};
  CHECK(ComputeEer(same, same).eer == doctest::Approx(0.5));
  CHECK_THROWS_AS(ComputeEer(bona, std::vector<double>{}), Error);
}

TEST_CASE("EER and min t-DCF match brute-force sweeps on random sets") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(2, 200);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> bona(size(rng)), spoof(size(rng));
    const double shift = 2.0 * g(rng);
    for (auto &v : bona) v = g(rng) + shift;
    for (auto &v : spoof) v = g(rng);
    const double bound = 1.0 / (2.0 * std::min(bona.size(), spoof.size()));
    CHECK(std::abs(ComputeEer(bona, spoof).eer - oracle::BruteEer(bona, spoof)) <= bound);
    TdcfCostModel cost = RandomCost(rng);
    CHECK(std::abs(ComputeMinTdcf(bona, spoof, cost).min_tdcf -
                   oracle::BruteMinTdcf(bona, spoof, ToOracle(cost))) <= 1e-12);
  }
}

TEST_CASE("metrics are invariant under a strictly increasing transform") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> bona(40), spoof(60);
    for (auto &v : bona) v = g(rng) + 1.0;
    for (auto &v : spoof) v = g(rng);
    std::vector<double> tb, ts;
    for (double v : bona) tb.push_back(std::tanh(v / 10.0));
    for (double v : spoof) ts.push_back(std::tanh(v / 10.0));
    TdcfCostModel cost = RandomCost(rng);
    CHECK(std::abs(ComputeEer(bona, spoof).eer - ComputeEer(tb, ts).eer) <= 1e-12);
    CHECK(std::abs(ComputeMinTdcf(bona, spoof, cost).min_tdcf -
                   ComputeMinTdcf(tb, ts, cost).min_tdcf) <= 1e-12);
  }
}

TEST_CASE("EER is symmetric under negation with swapped labels") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> bona(37), spoof(23);
  for (auto &v : bona) v = g(rng) + 0.7;
  for (auto &v : spoof) v = g(rng);
  std::vector<double> nb, ns;
  for (double v : spoof) nb.push_back(-v);
  for (double v : bona) ns.push_back(-v);
  CHECK(ComputeEer(bona, spoof).eer == doctest::Approx(ComputeEer(nb, ns).eer).epsilon(1e-12));
}

TEST_CASE("min t-DCF special cases") {
  std::vector<double> bona{2.0, 3.0}, spoof{-1.0, 0.0};
  CHECK(ComputeMinTdcf(bona, spoof, Balanced()).min_tdcf == 0.0);
  std::vector<double> same{0.1, 0.4, 0.7};
  TdcfCostModel eq = Balanced();
  eq.p_target = 0.495;
  eq.p_nontarget = 0.01;
  eq.p_spoof = 0.495;
  // p_fa_asv = 0 leaves C1 = C2 = 0.495.
  CHECK_NOTHROW(eq.Validate());
  CHECK(eq.C1() == doctest::Approx(eq.C2()));
  CHECK(ComputeMinTdcf(same, same, eq).min_tdcf == doctest::Approx(1.0));
  TdcfCostModel bad = Balanced();
  bad.p_miss_spoof_asv = 1.0;
  CHECK_THROWS_AS(ComputeMinTdcf(bona, spoof, bad), Error);
}

TEST_CASE("cost model config") {
  std::map<std::string, std::string> kv{{"p_target", "0.9405"},   {"c_miss_cm", "1"},
                                        {"c_fa_cm", "10"},        {"p_miss_asv", "0.01"},
                                        {"p_fa_asv", "0.01"},     {"p_miss_spoof_asv", "0.3"}};
  TdcfCostModel c = CostModelFromMap(kv);
  CHECK(c.p_spoof == 0.05);
  CHECK(c.p_nontarget == 0.0095);
  CHECK(c.c_fa_asv == 10.0);
  kv.erase("c_fa_cm");
  CHECK_THROWS_AS(CostModelFromMap(kv), Error);
  kv["c_fa_cm"] = "10";
  kv["bogus"] = "1";
  CHECK_THROWS_AS(CostModelFromMap(kv), Error);
}

TEST_CASE("DET curve endpoints and monotonicity") {
  std::vector<double> bona{1.0}, spoof{0.0};
  DetCurve d = DetPoints(bona, spoof);
  CHECK(d.far.front() == 1.0);
  CHECK(d.frr.front() == 0.0);
  bool zero = false;
  for (std::size_t i = 0; i < d.far.size(); ++i) zero = zero || (d.far[i] == 0 && d.frr[i] == 0);
  CHECK(zero);

  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 100);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> b(size(rng)), s(size(rng));
    for (auto &v : b) v = std::round(4 * g(rng)) / 4 + 0.5;
    for (auto &v : s) v = std::round(4 * g(rng)) / 4;
    DetCurve c = DetPoints(b, s);
    bool ok = c.far.front() == 1.0 && c.frr.front() == 0.0 && c.far.back() == 0.0 &&
              c.frr.back() == 1.0;
    for (std::size_t i = 1; i < c.far.size(); ++i)
      ok = ok && c.far[i] <= c.far[i - 1] && c.frr[i] >= c.frr[i - 1] &&
           c.thresholds[i] > c.thresholds[i - 1];
    CHECK(ok);
  }
}

TEST_CASE("unlabeled trials are an error") {
  ScoreSet s;
  s.Add("a", 1.0, Label::kBonafide);
  s.Add("b", 0.0);
  CHECK_THROWS_WITH(ComputeEer(s), "trial b has no label");
}
