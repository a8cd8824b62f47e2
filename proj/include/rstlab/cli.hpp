// Copyright 2026 The rstlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The rstlab command line, as a library so tests can drive it in-process.

#ifndef RSTLAB_CLI_HPP_
#define RSTLAB_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace rstlab::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kAssertionFailure = 1;
inline constexpr int kConfigError = 2;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutEnv = "RSTLAB_OUT";

/// Parses argv (argv[0] is the program name) and runs the command. Normal
/// output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace rstlab::cli

#endif  // RSTLAB_CLI_HPP_
