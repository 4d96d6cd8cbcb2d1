//
// Copyright 2025 The IEForge Authors
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
//

#ifndef IEFORGE_UTIL_SUBPROCESS_H_
#define IEFORGE_UTIL_SUBPROCESS_H_

#include <string>
#include <vector>

namespace ieforge {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string stderr_output;

  bool ok() const { return exit_code == 0 && !timed_out; }
};

// Runs argv[0] with the given arguments, capturing stderr. The child is
// killed (SIGKILL) once timeout_s elapses; timeout_s <= 0 means no limit.
// An empty workdir keeps the parent's working directory.
ProcessResult RunProcess(const std::vector<std::string>& argv,
                         const std::string& workdir = "",
                         double timeout_s = 0.0);

}  // namespace ieforge

#endif  // IEFORGE_UTIL_SUBPROCESS_H_
