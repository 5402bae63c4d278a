// prosody/tests/perception_test.cc

// Copyright 2026  The prosody-eval Authors
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
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "doctest.h"
#include "oracles.h"
#include "prosody/errors.h"
#include "prosody/perception.h"
#include "prosody/stats.h"
#include "synth.h"

using namespace prosody;
using prosody::testing::Rng;

namespace {

std::vector<PairwiseRecord> Pairs(const std::string &a, const std::string &b, int a_wins,
                                  int b_wins) {
  std::vector<PairwiseRecord> out;
  for (int i = 0; i < a_wins; ++i) out.push_back({"L", "s", a, b, a});
  for (int i = 0; i < b_wins; ++i) out.push_back({"L", "s", a, b, b});
  return out;
}

void Append(std::vector<PairwiseRecord> *to, const std::vector<PairwiseRecord> &from) {
  to->insert(to->end(), from.begin(), from.end());
}

double Sigmoid(double d) { return 1.0 / (1.0 + std::exp(-d)); }

}  // namespace

TEST_SUITE("welch") {
  TEST_CASE("hand-computed example") {
    WelchResult r = WelchTTest({1, 2, 3}, {2, 3, 4});
    CHECK(r.t == doctest::Approx(-1.2247449).epsilon(1e-6));
    CHECK(std::abs(r.df - 4.0) <= 1e-6);
    CHECK(std::abs(r.p - 0.288) <= 1e-3);
  }
  TEST_CASE("identical samples") {
    WelchResult r = WelchTTest({1, 4, 2, 8}, {1, 4, 2, 8});
    CHECK(r.t == 0.0);
    CHECK(r.p == doctest::Approx(1.0));
  }
  TEST_CASE("degenerate inputs") {
    CHECK_THROWS_AS(WelchTTest({1}, {1, 2}), ValidationError);
    CHECK_THROWS_AS(WelchTTest({2, 2}, {3, 3, 3}), ValidationError);
    CHECK_NOTHROW(WelchTTest({2, 2}, {3, 4}));
  }
  TEST_CASE("student t tail agrees with an independent implementation") {
    for (double df : {1.0, 2.5, 4.0, 9.7, 30.0, 250.0})
      for (double t : {0.0, 0.1, 0.7, 1.5, 2.2, 4.0, 9.0, 25.0}) {
        boost::math::students_t_distribution<double> law(df);
        double want = 2.0 * boost::math::cdf(boost::math::complement(law, t));
        CHECK(StudentTTwoSided(t, df) == doctest::Approx(want).epsilon(1e-10));
        CHECK(StudentTCdf(-t, df) == doctest::Approx(boost::math::cdf(law, -t)).epsilon(1e-10));
      }
  }
  TEST_CASE("antisymmetric in its arguments") {
    Rng rng(31);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<double> a(2 + rng.Below(10)), b(2 + rng.Below(10));
      for (double &v : a) v = rng.Normal();
      for (double &v : b) v = rng.Normal() * 3.0 + 1.0;
      WelchResult ab = WelchTTest(a, b), ba = WelchTTest(b, a);
      CHECK(ab.t == -ba.t);
      CHECK(ab.p == ba.p);
      CHECK(ab.df == ba.df);
    }
  }
}

TEST_SUITE("ratings") {
  TEST_CASE("MOS and humanness summaries") {
    std::vector<RatingRecord> r{{"L1", "A", "s1", 5, true},
                                {"L2", "A", "s1", 5, true},
                                {"L3", "A", "s2", 4, false},
                                {"L1", "B", "s1", 3, false}};
    auto mos = SummarizeMos(r);
    REQUIRE(mos.size() == 2);
    CHECK(mos[0].speaker_id == "A");
    CHECK(mos[0].mean == doctest::Approx(4.6667).epsilon(1e-4));
    CHECK(*mos[0].std_error == doctest::Approx(1.0 / 3.0));
    CHECK(mos[1].mean == 3.0);
    CHECK_FALSE(mos[1].std_error);
    auto hum = HumannessProportions(r);
    CHECK(hum[0].speaker_id == "A");
    CHECK(hum[0].proportion == doctest::Approx(2.0 / 3.0));
    CHECK(hum[1].proportion == 0.0);
    CHECK_THROWS_AS(SummarizeMos({}), ValidationError);
  }
  TEST_CASE("MOS mean ignores record order") {
    Rng rng(2);
    std::vector<RatingRecord> r;
    for (int i = 0; i < 200; ++i)
      r.push_back({"L", "S" + std::to_string(rng.Below(4)), "s",
                   1 + static_cast<int>(rng.Below(5)), rng.Bit()});
    auto base = SummarizeMos(r);
    for (int k = 0; k < 20; ++k) {
      for (std::size_t i = r.size() - 1; i > 0; --i) std::swap(r[i], r[rng.Below(i + 1)]);
      auto again = SummarizeMos(r);
      for (std::size_t i = 0; i < base.size(); ++i) CHECK(again[i].mean == base[i].mean);
    }
  }
  TEST_CASE("CSV parsing and row-level errors") {
    auto r = ParseRatings("listener,speaker,sentence,mos,judged_human\nL1,A,s1,4,yes\nL2,A,s1,2,false\n");
    REQUIRE(r.size() == 2);
    CHECK(r[0].mos == 4);
    CHECK(r[0].judged_human);
    try {
      ParseRatings("listener,speaker,sentence,mos,judged_human\nL1,A,s1,4,yes\nL1,A,s1,7,no\n");
      FAIL("accepted");
    } catch (const ValidationError &e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(ParseRatings("who,what\nx,y\n"), ParseError);
    CHECK_THROWS_AS(ParseRatings("listener,speaker,sentence,mos,judged_human\nL1,A,s1,4\n"),
                    ParseError);
    CHECK_THROWS_AS(ParseRatings("listener,speaker,sentence,mos,judged_human\nL1,A,s1,4,maybe\n"),
                    ValidationError);
  }
  TEST_CASE("pair parsing") {
    auto p = ParsePairs("listener,sentence,speaker_a,speaker_b,winner\nL1,s1,A,B,B\n");
    REQUIRE(p.size() == 1);
    CHECK(p[0].winner == "B");
    CHECK_THROWS_AS(ParsePairs("listener,sentence,speaker_a,speaker_b,winner\nL1,s1,A,B,C\n"),
                    ValidationError);
    CHECK_THROWS_AS(ParsePairs("listener,sentence,speaker_a,speaker_b,winner\nL1,s1,A,A,A\n"),
                    ValidationError);
  }
}

TEST_SUITE("pairwise") {
  TEST_CASE("win matrix proportions") {
    std::vector<PairwiseRecord> r = Pairs("A", "B", 3, 1);
    Append(&r, Pairs("A", "C", 1, 0));
    WinMatrix w = BuildWinMatrix(r);
    std::size_t a = w.Index("A"), b = w.Index("B"), c = w.Index("C");
    CHECK(*w.Proportion(a, b) == 0.75);
    CHECK(*w.Proportion(b, a) == 0.25);
    CHECK(*w.Proportion(a, c) == 1.0);
    CHECK(*w.Proportion(c, a) == 0.0);
    CHECK_FALSE(w.Proportion(b, c));
  }
  TEST_CASE("two-speaker closed form and symmetry") {
    BtmResult r = FitBradleyTerry(Pairs("A", "B", 3, 1));
    CHECK(r.converged);
    CHECK(std::abs(r.scores["A"] - std::log(3.0) / 2) <= 1e-6);
    CHECK(std::abs(r.scores["B"] + std::log(3.0) / 2) <= 1e-6);
    BtmResult eq = FitBradleyTerry(Pairs("A", "B", 5, 5));
    CHECK(std::abs(eq.scores["A"]) <= 1e-9);
    CHECK(std::abs(eq.scores["B"]) <= 1e-9);
  }
  TEST_CASE("three speakers match a likelihood grid search") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
      Rng rng(seed);
      prosody::testing::WinCounts counts;
      std::vector<PairwiseRecord> recs;
      const std::string names[] = {"A", "B", "C"};
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          int wi = 1 + static_cast<int>(rng.Below(15)), wj = 1 + static_cast<int>(rng.Below(15));
          counts[{i, j}] = wi;
          counts[{j, i}] = wj;
          Append(&recs, Pairs(names[i], names[j], wi, wj));
        }
      BtmResult fit = FitBradleyTerry(recs);
      std::vector<double> want = prosody::testing::GridSearchBt3(counts);
      CHECK(fit.converged);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(fit.scores[names[i]] - want[i]) <= 1e-4);
    }
  }
  TEST_CASE("duplicating every record leaves scores unchanged") {
    std::vector<PairwiseRecord> r = Pairs("A", "B", 7, 3);
    Append(&r, Pairs("B", "C", 4, 6));
    Append(&r, Pairs("A", "C", 2, 2));
    BtmResult once = FitBradleyTerry(r);
    std::vector<PairwiseRecord> twice = r;
    Append(&twice, r);
    BtmResult again = FitBradleyTerry(twice);
    double sum = 0.0;
    for (const auto &[k, v] : once.scores) {
      CHECK(std::abs(again.scores[k] - v) <= 1e-8);
      sum += v;
    }
    CHECK(std::abs(sum) <= 1e-12);
  }
  TEST_CASE("fitted scores reproduce balanced win frequencies") {
    Rng rng(99);
    const std::vector<double> truth{0.9, 0.3, -0.2, -1.0};
    std::vector<PairwiseRecord> r;
    for (std::size_t i = 0; i < truth.size(); ++i)
      for (std::size_t j = i + 1; j < truth.size(); ++j)
        for (int t = 0; t < 1000; ++t) {
          std::string a = "S" + std::to_string(i), b = "S" + std::to_string(j);
          r.push_back({"L", "s", a, b, rng.Bit(Sigmoid(truth[i] - truth[j])) ? a : b});
        }
    BtmResult fit = FitBradleyTerry(r);
    WinMatrix w = BuildWinMatrix(r);
    CHECK(fit.converged);
    for (std::size_t i = 0; i < w.speakers.size(); ++i)
      for (std::size_t j = 0; j < w.speakers.size(); ++j) {
        if (i == j) continue;
        double model = Sigmoid(fit.scores[w.speakers[i]] - fit.scores[w.speakers[j]]);
        CHECK(std::abs(model - *w.Proportion(i, j)) <= 0.02);
      }
  }
  TEST_CASE("disconnected graphs name their components") {
    std::vector<PairwiseRecord> r = Pairs("A", "B", 2, 1);
    Append(&r, Pairs("C", "D", 1, 1));
    try {
      FitBradleyTerry(r);
      FAIL("accepted");
    } catch (const ValidationError &e) {
      std::string msg = e.what();
      CHECK(msg.find("{A, B}") != std::string::npos);
      CHECK(msg.find("{C, D}") != std::string::npos);
    }
  }
  TEST_CASE("an undefeated speaker diverges to the clamp") {
    std::vector<PairwiseRecord> r = Pairs("A", "B", 5, 0);
    Append(&r, Pairs("B", "C", 3, 2));
    BtmResult fit = FitBradleyTerry(r);
    CHECK_FALSE(fit.converged);
    for (const auto &[k, v] : fit.scores) {
      CHECK(std::isfinite(v));
      CHECK(std::abs(v) <= kBtmScoreClamp);
    }
    CHECK(fit.scores["A"] > fit.scores["B"]);
    CHECK(fit.scores["B"] > fit.scores["C"]);
  }
}
