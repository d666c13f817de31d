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

#include "cfii/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cfii/error.hpp"
#include "cfii/fim.hpp"

namespace cfii {
namespace {

void require_positive(double f, const char* what) {
  if (!(f > 0.0)) {
    throw NonPositiveFisherInformation(std::string(what) + " must be positive, got " +
                                       std::to_string(f));
  }
}

constexpr double kNegligibleFi = 1e-12;
constexpr int kScanPoints = 512;
constexpr double kGoldenTolerance = 1e-8;

}  // namespace

SplitSpec::SplitSpec(double theta_total, std::vector<double> segments)
    : theta_total_(theta_total), segments_(std::move(segments)) {
  if (!(theta_total_ > 0.0) || !std::isfinite(theta_total_)) {
    throw InvalidArgument("total parameter must be positive and finite");
  }
  if (segments_.empty()) throw InvalidArgument("split needs at least one segment");
  double sum = 0.0;
  for (double s : segments_) {
    if (!(s > 0.0)) throw InvalidArgument("split segments must be positive");
    sum += s;
  }
  if (std::abs(sum - theta_total_) > 1e-12 * std::max(1.0, theta_total_)) {
    throw InvalidArgument("split segments must sum to the total parameter");
  }
}

SplitSpec SplitSpec::equal(double theta_total, int k) {
  if (k < 1) throw InvalidArgument("number of segments must be >= 1");
  return SplitSpec(theta_total, std::vector<double>(k, theta_total / k));
}

SplitSpec SplitSpec::two_way(double theta_total, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InvalidArgument("split fraction must lie in (0, 1)");
  }
  const double first = fraction * theta_total;
  return SplitSpec(theta_total, {first, theta_total - first});
}

double v_path(double f_ab, double f_ac, double f_cb) {
  require_positive(f_ab, "endpoint Fisher information");
  require_positive(f_ac, "first segment Fisher information");
  require_positive(f_cb, "second segment Fisher information");
  return 1.0 / f_ab - 1.0 / f_ac - 1.0 / f_cb;
}

double v_chain(double f_end, std::span<const double> f_segments) {
  require_positive(f_end, "endpoint Fisher information");
  if (f_segments.empty()) throw InvalidArgument("chain needs at least one segment");
  double v = 1.0 / f_end;
  for (double f : f_segments) {
    require_positive(f, "segment Fisher information");
    v -= 1.0 / f;
  }
  return v;
}

double classical_benchmark_path(double f_ac, double f_cb) {
  const double fis[] = {f_ac, f_cb};
  return harmonic_composition(fis);
}

double gain_indicator(double f_end, double f_benchmark) {
  require_positive(f_end, "endpoint Fisher information");
  require_positive(f_benchmark, "benchmark Fisher information");
  return 0.5 * std::log(f_benchmark / f_end);
}

double improvement_factor(double v, double r_classical) {
  if (!(r_classical > 0.0) || !(r_classical + v > 0.0)) {
    throw DegenerateBenchmark("improvement factor needs R_cl > 0 and R_cl + V > 0");
  }
  return r_classical / (r_classical + v);
}

WitnessReport make_witness_report(double f_end, std::span<const double> f_segments) {
  WitnessReport r;
  r.f_segments.assign(f_segments.begin(), f_segments.end());
  r.f_end = f_end;
  r.v = v_chain(f_end, f_segments);
  r.f_benchmark = harmonic_composition(f_segments);
  r.gamma_ratio = f_end / r.f_benchmark;
  r.g_indicator = gain_indicator(f_end, r.f_benchmark);
  return r;
}

WitnessReport evaluate_split(const BinaryModel& model, const SplitSpec& split) {
  std::vector<double> fis;
  fis.reserve(split.segments().size());
  for (double s : split.segments()) fis.push_back(model.fi(s));
  return make_witness_report(model.fi(split.theta_total()), fis);
}

SplitBenchmark split_optimized_benchmark(const BinaryModel& model, double theta_total) {
  if (!(theta_total > 0.0) || !std::isfinite(theta_total)) {
    throw InvalidArgument("total parameter must be positive and finite");
  }
  auto benchmark = [&](double lambda) {
    const double f1 = model.fi(lambda * theta_total);
    const double f2 = model.fi((1.0 - lambda) * theta_total);
    if (!(f1 >= kNegligibleFi) || !(f2 >= kNegligibleFi)) return 0.0;
    return 1.0 / (1.0 / f1 + 1.0 / f2);
  };

  std::vector<double> lambdas(kScanPoints);
  std::vector<double> values(kScanPoints);
  int zero_run = 0;
  int longest_zero_run = 0;
  for (int i = 0; i < kScanPoints; ++i) {
    lambdas[i] = (i + 0.5) / kScanPoints;
    values[i] = benchmark(lambdas[i]);
    zero_run = values[i] > 0.0 ? 0 : zero_run + 1;
    longest_zero_run = std::max(longest_zero_run, zero_run);
  }
  const int best =
      static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
  if (values[best] <= 0.0 || longest_zero_run > 2) {
    throw OptimizationFailure("Fisher information vanishes on a subinterval of the split range");
  }

  // Golden-section refinement inside the neighbouring scan cells.
  double lo = best > 0 ? lambdas[best - 1] : lambdas[best] / 2.0;
  double hi = best + 1 < kScanPoints ? lambdas[best + 1] : (1.0 + lambdas[best]) / 2.0;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = benchmark(x1);
  double f2 = benchmark(x2);
  while (hi - lo > kGoldenTolerance) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = benchmark(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = benchmark(x1);
    }
  }
  SplitBenchmark out{values[best], lambdas[best]};
  const double mid = 0.5 * (lo + hi);
  const double refined = benchmark(mid);
  if (refined > out.fi) out = {refined, mid};
  if (f1 > out.fi) out = {f1, x1};
  if (f2 > out.fi) out = {f2, x2};

  const double half = benchmark(0.5);
  if (half >= out.fi - 1e-12 * out.fi) out = {std::max(half, out.fi), 0.5};
  return out;
}

WitnessReport k_chain_gain(const BinaryModel& model, double theta_total, int k,
                           Partition partition) {
  if (k < 2) throw InvalidArgument("a chain needs at least two segments");
  if (partition == Partition::kOptimized) {
    if (k != 2) {
      throw InvalidArgument("optimized partitions are available for k = 2 only");
    }
    const SplitBenchmark opt = split_optimized_benchmark(model, theta_total);
    return evaluate_split(model, SplitSpec::two_way(theta_total, opt.lambda));
  }
  return evaluate_split(model, SplitSpec::equal(theta_total, k));
}

double find_unit_crossing(const std::function<double(double)>& gain,
                          const CrossingSearch& search) {
  if (!(search.hi > search.lo) || search.bracket_points < 2) {
    throw InvalidArgument("crossing search needs hi > lo and >= 2 bracket points");
  }
  auto excess = [&](double x) { return gain(x) - 1.0; };
  double prev_x = search.lo;
  double prev = excess(prev_x);
  if (!(prev > 0.0)) {
    throw NoCrossing("gain does not exceed one at the start of the search interval");
  }
  for (int i = 1; i < search.bracket_points; ++i) {
    const double x = search.lo + (search.hi - search.lo) * i / (search.bracket_points - 1);
    const double cur = excess(x);
    if (cur <= 0.0) {
      double lo = prev_x;
      double hi = x;
      while (hi - lo > search.tolerance) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_x = x;
    prev = cur;
  }
  throw NoCrossing("gain stays above one on the search interval");
}

double gamma_crossing(const NoisyFringeParams& params, double theta_total, int k,
                      const CrossingSearch& search) {
  auto gain = [&](double gamma) {
    NoisyFringe model(NoisyFringeParams::make(params.vartheta0, gamma, params.epsilon_r));
    return k_chain_gain(model, theta_total, k).gamma_ratio;
  };
  return find_unit_crossing(gain, search);
}

NsitDemo nsit_separation_demo(int grid_points) {
  if (grid_points < 2) throw InvalidArgument("grid needs at least two points");
  // Both contexts are built identically: the optional earlier measurement
  // does not disturb the readout statistics.
  const QubitFringe context0(QubitPreparation::deterministic(0.0));
  const QubitFringe context1(QubitPreparation::deterministic(0.0));

  NsitDemo demo;
  for (int i = 0; i < grid_points; ++i) {
    const double theta = 2.0 * kPi * (i + 1.0) / (grid_points + 1.0);
    for (int b = 0; b < 2; ++b) {
      demo.max_marginal_deviation =
          std::max(demo.max_marginal_deviation,
                   std::abs(context0.probability(b, theta) - context1.probability(b, theta)));
    }
    demo.max_fi_deviation = std::max(demo.max_fi_deviation, std::abs(context0.fi(theta) - 1.0));
  }
  demo.nsit_holds = demo.max_marginal_deviation < 1e-14;

  demo.v_path_value = -std::numeric_limits<double>::infinity();
  constexpr int kSplitGrid = 64;
  for (int i = 1; i <= kSplitGrid; ++i) {
    for (int j = 1; j <= kSplitGrid; ++j) {
      const double ac = kPi * i / kSplitGrid;
      const double cb = kPi * j / kSplitGrid;
      const double v = v_path(context0.fi(ac + cb), context0.fi(ac), context0.fi(cb));
      demo.v_path_value = std::max(demo.v_path_value, v);
    }
  }
  return demo;
}

}  // namespace cfii
