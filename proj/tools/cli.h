// Copyright 2026 The uwdet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UWDET_TOOLS_CLI_H_
#define UWDET_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace uwdet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Runs the uwdet command line. args[0] is the program name. Primary output
// goes to out (or to --out files), diagnostics to err.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace uwdet::cli

#endif  // UWDET_TOOLS_CLI_H_
