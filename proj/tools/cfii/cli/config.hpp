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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cfii::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "1.5", "pi", "-pi/2", "2pi", "0.25*pi/3".
double parse_angle(const std::string& text);

/// Inclusive linear grid written "A:B:N".
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  int n = 2;

  static GridSpec parse(const std::string& text);
  std::vector<double> points() const;
  std::string str() const;
};

struct ExperimentConfig {
  std::string command;

  std::string model = "qubit";  // qubit | noisy
  double vartheta = 0.0;
  double varphi = 1.5707963267948966;
  double vartheta0 = 0.0;
  double gamma = 0.25;
  double eps_r = 0.02;

  int k = 4;
  double t_total = 1.5707963267948966;
  double theta = 1.5707963267948966;
  std::int64_t shots = 1000;
  std::optional<std::int64_t> reps;
  std::string se_mode = "analytic";  // analytic | empirical
  double clip = 5.0;

  int restarts = 36;
  int l = 5;
  int m = 5;
  int steps = 2000;
  double lr = 0.05;

  std::optional<GridSpec> grid;
  std::optional<GridSpec> gamma_grid;
  std::optional<std::vector<int>> k_list;
  std::optional<std::vector<std::int64_t>> n_list;
  std::optional<std::vector<std::int64_t>> shots_list;

  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";  // csv | json

  /// Fills command-dependent defaults and checks every invariant.
  void finalize();

  nlohmann::ordered_json to_json() const;
};

bool is_stochastic(const std::string& command);

/// Reads a config object. Accepts either a bare config or a JSON result
/// document, in which case meta.config is used.
ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});

}  // namespace cfii::cli
