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

#include <functional>
#include <span>
#include <vector>

#include "cfii/models.hpp"

namespace cfii {

/// Additive decomposition of a total parameter into positive segments.
class SplitSpec {
 public:
  SplitSpec(double theta_total, std::vector<double> segments);
  static SplitSpec equal(double theta_total, int k);
  static SplitSpec two_way(double theta_total, double fraction);

  double theta_total() const { return theta_total_; }
  const std::vector<double>& segments() const { return segments_; }
  int k() const { return static_cast<int>(segments_.size()); }

 private:
  double theta_total_;
  std::vector<double> segments_;
};

/// Endpoint information compared against a classical causal benchmark.
struct WitnessReport {
  double v = 0.0;             // endpoint resistance minus summed segment resistance
  double f_end = 0.0;
  double f_benchmark = 0.0;
  double gamma_ratio = 0.0;   // f_end / f_benchmark
  double g_indicator = 0.0;   // (1/2) log(f_benchmark / f_end)
  std::vector<double> f_segments;
};

double v_path(double f_ab, double f_ac, double f_cb);
double v_chain(double f_end, std::span<const double> f_segments);
double classical_benchmark_path(double f_ac, double f_cb);
double gain_indicator(double f_end, double f_benchmark);
double improvement_factor(double v, double r_classical);

WitnessReport make_witness_report(double f_end, std::span<const double> f_segments);

/// Evaluates the model on every segment of the split.
WitnessReport evaluate_split(const BinaryModel& model, const SplitSpec& split);

struct SplitBenchmark {
  double fi = 0.0;
  double lambda = 0.5;  // theta_ac / theta_total at the maximum
};

/// max over 0 < theta_ac < theta_total of (1/F(theta_ac) + 1/F(theta_total - theta_ac))^{-1}.
///
/// A 512-point scan brackets the maximum and golden-section search refines
/// it to a 1e-8 bracket in lambda. Near-ties resolve to lambda = 1/2.
/// Splits where either segment carries less than 1e-12 information are
/// skipped. Throws OptimizationFailure if the information vanishes on a
/// stretch of the scan rather than at isolated points.
SplitBenchmark split_optimized_benchmark(const BinaryModel& model, double theta_total);

enum class Partition { kEqual, kOptimized };

/// K-segment chain comparison. kOptimized is available for k = 2 only.
WitnessReport k_chain_gain(const BinaryModel& model, double theta_total, int k,
                           Partition partition = Partition::kEqual);

struct CrossingSearch {
  double lo = 0.0;
  double hi = 2.0;
  int bracket_points = 64;
  double tolerance = 1e-6;
};

/// First root of gain(x) = 1 on [lo, hi], with gain(lo) > 1 required.
/// Throws NoCrossing if the scan never drops to 1.
double find_unit_crossing(const std::function<double(double)>& gain,
                          const CrossingSearch& search = {});

/// Dephasing rate at which the equal-partition gain of the noisy fringe
/// falls to one. The gamma field of `params` is ignored.
double gamma_crossing(const NoisyFringeParams& params, double theta_total, int k,
                      const CrossingSearch& search = {});

struct NsitDemo {
  bool nsit_holds = false;
  double v_path_value = 0.0;          // largest V over the split scan
  double max_marginal_deviation = 0.0;
  double max_fi_deviation = 0.0;      // max |F - 1| on the grid
};

/// Context-independent binary family p0 = cos^2(theta/2): the marginal is
/// identical in both contexts, the information is constant, and V = -1 for
/// every split.
NsitDemo nsit_separation_demo(int grid_points = 1000);

}  // namespace cfii
