// Copyright 2026 The dpaudit Authors
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

#ifndef DPAUDIT_TOOLS_CLI_H_
#define DPAUDIT_TOOLS_CLI_H_

#include <ostream>

namespace dpaudit {

// Entry point of the `dpaudit` tool. Returns 0 on success (including
// --help), 1 on runtime failure and 2 on a usage or config error.
int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace dpaudit

#endif  // DPAUDIT_TOOLS_CLI_H_
