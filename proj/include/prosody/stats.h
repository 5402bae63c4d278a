// prosody/stats.h

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

#ifndef PROSODY_STATS_H_
#define PROSODY_STATS_H_

#include <vector>

namespace prosody {

// I_x(a, b) by continued fraction (modified Lentz), a, b > 0, 0 <= x <= 1.
double RegularizedIncompleteBeta(double a, double b, double x);

// P(T <= t) for Student's t with `df` > 0 degrees of freedom.
double StudentTCdf(double t, double df);

// Two-sided tail probability P(|T| >= |t|).
double StudentTTwoSided(double t, double df);

struct WelchResult {
  double t = 0.0;
  double p = 1.0;   // two-sided
  double df = 0.0;  // Welch-Satterthwaite
};

// Unequal-variance t-test of mean(a) - mean(b). Throws ValidationError when
// a sample has fewer than two values or both samples have zero variance.
WelchResult WelchTTest(const std::vector<double> &a, const std::vector<double> &b);

}  // namespace prosody

#endif  // PROSODY_STATS_H_
