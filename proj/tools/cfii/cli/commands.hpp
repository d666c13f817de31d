// Copyright 2026 The CFII Authors
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

#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "cli/table.hpp"

namespace cfii::cli {

inline constexpr const char* kToolVersion = "0.3.0";

ResultTable cmd_fi(const ExperimentConfig& config);
ResultTable cmd_landscape(const ExperimentConfig& config);
ResultTable cmd_certify(const ExperimentConfig& config);
ResultTable cmd_adversary(const ExperimentConfig& config);
ResultTable cmd_rmse(const ExperimentConfig& config);
ResultTable cmd_chain(const ExperimentConfig& config);
ResultTable cmd_nsit_demo(const ExperimentConfig& config);
ResultTable cmd_crossing(const ExperimentConfig& config);

/// Runs config.command and attaches the metadata block.
ResultTable run_command(const ExperimentConfig& config);

/// Exit codes: 0 success, 2 config error, 3 numerical degeneracy, 1 anything else.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfii::cli
