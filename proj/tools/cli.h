/*
 * Copyright 2026 The LaPLACE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LAPLACE_TOOLS_CLI_H_
#define LAPLACE_TOOLS_CLI_H_

#include "absl/status/status.h"

namespace laplace::cli {

enum ExitCode {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitAdapter = 3,
  kExitInternal = 4,
};

ExitCode ExitCodeFor(const absl::Status& status);

// Entry point of the `laplace` tool.
int Run(int argc, char** argv);

}  // namespace laplace::cli

#endif  // LAPLACE_TOOLS_CLI_H_
