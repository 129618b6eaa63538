// Copyright 2026 The rnx Authors
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

#ifndef RNX_TOOLS_CLI_H_
#define RNX_TOOLS_CLI_H_

#include <iosfwd>

namespace rnx::cli {

// Entry point of the rnx tool. Diagnostics go to `err`, results to `out`.
int Run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace rnx::cli

#endif  // RNX_TOOLS_CLI_H_
