// prosody/cli.h

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

#ifndef PROSODY_CLI_H_
#define PROSODY_CLI_H_

#include <string>
#include <vector>

namespace prosody {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;

// Entry point of the prosody-eval command. Never throws: errors are logged
// and mapped to kExitFatal; skipped inputs give kExitPartial.
int RunCli(int argc, const char *const *argv);
int RunCli(const std::vector<std::string> &args);  // args[0] is the program name

}  // namespace prosody

#endif  // PROSODY_CLI_H_
