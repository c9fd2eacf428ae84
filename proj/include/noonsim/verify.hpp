// Copyright 2026 The noonsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <string>
#include <vector>

namespace noonsim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Built-in oracle suite: operator algebra, closed-form Rabi and pulse
/// rotations, the analytic ideal-protocol ladder, amplitude damping and
/// dephasing, generator invariants, integrator order and kernel agreement.
/// Every check is independent; a throwing check is reported as failed.
std::vector<CheckResult> run_verification();

}  // namespace noonsim
