// prosody/tests/support/oracles.h

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

// Reference implementations written straight from the metric definitions,
// with no code shared with the library. Tests compare the library against
// these.

#ifndef PROSODY_TESTS_SUPPORT_ORACLES_H_
#define PROSODY_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace prosody::testing {

struct OracleBinary {
  double zero_one_loss = 0.0;
  double smoothed_loss = 0.0;
  std::optional<double> precision, recall, f1;
};

// p: candidate bits, s[j]: reference j's bits, c: correctness threshold.
inline OracleBinary LiteralBinaryMetrics(const std::vector<int> &p,
                                         const std::vector<std::vector<int>> &s,
                                         double c) {
  const std::size_t n = p.size(), m = s.size();
  std::vector<double> alpha(n);
  for (std::size_t i = 0; i < n; ++i) {
    int same = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (p[i] == s[j][i]) same += 1;
    alpha[i] = static_cast<double>(same) / static_cast<double>(m);
  }
  OracleBinary r;
  int wrong = 0;
  double eps_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] < c) ++wrong;
    double q = 4.0 * std::numbers::pi * alpha[i];
    eps_sum += std::exp(-(q * q));
  }
  if (n > 0) {
    r.zero_one_loss = static_cast<double>(wrong) / static_cast<double>(n);
    r.smoothed_loss = eps_sum / static_cast<double>(n);
  }
  int tp = 0, predicted = 0, majority = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] == 1) {
      ++predicted;
      if (alpha[i] >= c) ++tp;
    }
    int ones = 0;
    for (std::size_t j = 0; j < m; ++j) ones += s[j][i];
    if (static_cast<double>(ones) / static_cast<double>(m) >= c) ++majority;
  }
  if (predicted > 0) r.precision = static_cast<double>(tp) / predicted;
  if (majority > 0) r.recall = static_cast<double>(tp) / majority;
  if (r.precision && r.recall) {
    double P = *r.precision, R = *r.recall;
    r.f1 = (P + R == 0.0) ? 0.0 : 2.0 * P * R / (P + R);
  }
  return r;
}

// Moving-median threshold evaluated index by index.
inline std::vector<double> LiteralMedianThreshold(const std::vector<double> &x, int h,
                                                  double rho_mult) {
  const int n = static_cast<int>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double rho = rho_mult * std::sqrt(ss / n);
  std::vector<double> t(x.size());
  for (int i = 0; i < n; ++i) {
    std::vector<double> w;
    for (int j = i - h / 2; j <= i + h / 2; ++j)
      if (j >= 0 && j < n) w.push_back(x[static_cast<std::size_t>(j)]);
    std::sort(w.begin(), w.end());
    const std::size_t k = w.size();
    double med = (k % 2 == 1) ? w[k / 2] : (w[k / 2 - 1] + w[k / 2]) / 2.0;
    t[static_cast<std::size_t>(i)] = rho + med;
  }
  return t;
}

inline std::vector<int> LiteralPeaks(const std::vector<double> &x, int h, double rho_mult,
                                     bool endpoints) {
  const std::vector<double> t = LiteralMedianThreshold(x, h, rho_mult);
  const int n = static_cast<int>(x.size());
  std::vector<int> e(x.size(), 0);
  for (int i = 0; i < n; ++i) {
    auto at = [&](int k) { return x[static_cast<std::size_t>(k)]; };
    bool above = at(i) > t[static_cast<std::size_t>(i)];
    bool local_max;
    if (n == 1)
      local_max = false;
    else if (i == 0)
      local_max = endpoints && at(0) > at(1);
    else if (i == n - 1)
      local_max = endpoints && at(n - 1) > at(n - 2);
    else
      local_max = at(i) > at(i - 1) && at(i) > at(i + 1);
    e[static_cast<std::size_t>(i)] = (above && local_max) ? 1 : 0;
  }
  return e;
}

// wins[{a, b}] = times a beat b.
using WinCounts = std::map<std::pair<int, int>, int>;

inline double BtLogLikelihood(const WinCounts &wins, const std::vector<double> &s) {
  double ll = 0.0;
  for (const auto &[ab, k] : wins) {
    double d = s[static_cast<std::size_t>(ab.first)] - s[static_cast<std::size_t>(ab.second)];
    ll += k * -std::log1p(std::exp(-d));
  }
  return ll;
}

// Maximizes the three-speaker likelihood over sum-zero scores (s0, s1,
// -s0-s1) by repeatedly searching a 41 x 41 grid and zooming in on the best
// cell.
inline std::vector<double> GridSearchBt3(const WinCounts &wins) {
  double c0 = 0.0, c1 = 0.0, step = 0.25;
  while (step > 1e-8) {
    double best = -INFINITY, b0 = c0, b1 = c1;
    for (int i = -20; i <= 20; ++i)
      for (int j = -20; j <= 20; ++j) {
        double s0 = c0 + i * step, s1 = c1 + j * step;
        double ll = BtLogLikelihood(wins, {s0, s1, -s0 - s1});
        if (ll > best) {
          best = ll;
          b0 = s0;
          b1 = s1;
        }
      }
    c0 = b0;
    c1 = b1;
    step /= 8.0;
  }
  return {c0, c1, -c0 - c1};
}

}  // namespace prosody::testing

#endif  // PROSODY_TESTS_SUPPORT_ORACLES_H_
