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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cfii/fim.hpp"
#include "cfii/models.hpp"
#include "cfii/rng.hpp"

namespace cfii {

/// Two-sided normal quantile for 95% intervals.
inline constexpr double kZ95 = 1.959964;

/// Independent binary outcomes recorded in one context.
struct ContextSample {
  double theta = 0.0;
  std::vector<std::uint8_t> outcomes;

  std::size_t n() const { return outcomes.size(); }
  std::size_t count(int x) const;
};

struct FiEstimate {
  double value = 0.0;
  double variance = 0.0;  // variance of the estimate itself
  std::size_t n = 0;
  bool degenerate = false;  // n = 1: variance is reported as 0
};

struct BinaryCounts {
  std::size_t n0 = 0;
  std::size_t n1 = 0;
  std::size_t total() const { return n0 + n1; }
};

ContextSample sample_binary(const BinaryModel& model, double theta, std::size_t n,
                            CounterRng& rng);
ContextSample sample_binary(const BinaryModel& model, double theta, std::size_t n,
                            std::uint64_t seed);

/// Mean of squared analytic scores over the sample, with the unbiased
/// sample variance of the squared scores divided by n.
FiEstimate plugin_fi(const ContextSample& sample, const BinaryModel& model);

/// Fourth moment of the score, sum_x p_x s_x^4.
double analytic_mu4(const BinaryModel& model, double theta);

/// Var of the plug-in estimate from analytic moments: (mu4 - F^2) / n.
double analytic_plugin_variance(const BinaryModel& model, double theta, std::size_t n);

enum class SeMode {
  kAnalyticMoment,  // analytic F and mu4 at each context's theta
  kEmpirical,       // plug-in estimates and their sample variances
};

const char* to_string(SeMode mode);

struct CertificationReport {
  double v_hat = 0.0;
  double se = 0.0;
  double z = 0.0;
  Interval ci95;
  FiEstimate endpoint;
  std::vector<FiEstimate> segments;
  SeMode mode = SeMode::kAnalyticMoment;
};

/// Witness estimate 1/F_end - sum_j 1/F_j from independent contexts, with a
/// delta-method standard error and Z = -V/SE.
///
/// Every context is scored under the same fringe `model` at its own theta.
/// Throws DegenerateError when a plug-in estimate is zero and
/// InvalidArgument when no segment is given.
CertificationReport certify_vk(const ContextSample& endpoint,
                               std::span<const ContextSample> segments,
                               const BinaryModel& model,
                               SeMode mode = SeMode::kAnalyticMoment);

/// Population version of certify_vk for an equal K-segment chain: V_K from
/// the analytic informations and the analytic-moment SE at n shots per context.
CertificationReport expected_certification(const BinaryModel& model, double theta_total,
                                           int k, std::size_t shots_per_context);

/// Finite-difference score from smoothed outcome frequencies at theta +- delta.
std::array<double, 2> classifier_score(BinaryCounts plus, BinaryCounts minus, double delta,
                                       double alpha);

struct ClassifierOptions {
  double delta = 0.10;
  double alpha = 5.0;
  std::size_t n_train = 100000;
  std::size_t n_eval = 100000;
};

/// Trains the closed-form binary classifier on samples at theta +- delta and
/// averages its squared score over fresh samples at theta.
FiEstimate classifier_fi(const BinaryModel& model, double theta,
                         const ClassifierOptions& options, CounterRng& rng);

struct MleEstimate {
  double theta = 0.0;
  bool on_branch_edge = false;  // p0_hat hit 0 or 1
};

/// vartheta + 2 arccos(sqrt(p0_hat)) on the monotone branch
/// [vartheta, vartheta + pi]; p0_hat is clamped to [0, 1].
MleEstimate mle_theta(double p0_hat, double vartheta);

struct RmseResult {
  double rmse = 0.0;
  std::size_t edge_hits = 0;
};

/// Monte-Carlo RMSE of mle_theta for reps independent n-shot experiments
/// drawn from `model` at theta_true. Replication r uses stream r of `seed`.
RmseResult mc_rmse(const BinaryModel& model, double theta_true, double vartheta,
                   std::size_t n, std::size_t reps, std::uint64_t seed);

struct VkDistribution {
  double mean = 0.0;
  double sd = 0.0;
  Interval ci95;  // empirical 2.5% and 97.5% quantiles
  std::vector<double> values;
};

/// Replicates the equal-partition K-chain certification experiment on the
/// noisy fringe and summarizes the spread of the witness estimate.
VkDistribution mc_vk_distribution(const NoisyFringeParams& params, double theta_total, int k,
                                  std::size_t shots_per_context, std::size_t reps,
                                  std::uint64_t seed);

/// Linear-interpolation quantile of an unsorted sample (q in [0, 1]).
double empirical_quantile(std::vector<double> values, double q);

}  // namespace cfii
