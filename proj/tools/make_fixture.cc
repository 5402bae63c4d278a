// prosody/tools/make_fixture.cc

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

// Writes the synthetic test corpus used by the examples and tests.

#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "fixture.h"

int main(int argc, char **argv) {
  CLI::App app{"Synthesize a small word-aligned prosody corpus", "make_fixture"};
  std::string out;
  prosody::testing::FixtureOptions opts;
  app.add_option("--out", out, "output directory")->required();
  app.add_option("--seed", opts.seed, "random seed");
  app.add_option("--sentences", opts.sentences, "number of sentences");
  app.add_option("--sample-rate", opts.sample_rate_hz, "sample rate in Hz");
  app.add_option("--human-noise", opts.human_noise, "contour noise of the humans");
  CLI11_PARSE(app, argc, argv);
  try {
    auto paths = prosody::testing::WriteFixtureCorpus(out, opts);
    std::printf("%s\n", paths.manifest.string().c_str());
  } catch (const std::exception &e) {
    std::fprintf(stderr, "make_fixture: %s\n", e.what());
    return 1;
  }
  return 0;
}
