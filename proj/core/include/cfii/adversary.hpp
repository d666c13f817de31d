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
#include <vector>

#include <Eigen/Dense>

#include "cfii/fim.hpp"
#include "cfii/rng.hpp"

namespace cfii {

/// Trainable two-module classical path A -> C -> B.
///
/// The upstream kernel alpha(c | theta_1) and the downstream kernel
/// beta(b | c, theta_2) are softmax-tangent models: only the logits and their
/// parameter derivatives at the expansion point enter the local informations.
/// `d` and `d_dot` are L x M with one row per mediator value.
struct AdversaryParams {
  Eigen::VectorXd a;
  Eigen::VectorXd a_dot;
  Eigen::MatrixXd d;
  Eigen::MatrixXd d_dot;
  // Expansion points, carried as metadata only.
  double theta1_0 = 0.0;
  double theta2_0 = 0.0;

  static AdversaryParams zeros(int mediators, int outcomes);
  /// Every logit and logit derivative drawn i.i.d. from N(0, scale^2).
  static AdversaryParams random(int mediators, int outcomes, CounterRng& rng,
                                double scale = 1.0);

  int mediators() const { return static_cast<int>(a.size()); }
  int outcomes() const { return static_cast<int>(d.cols()); }
  Eigen::Index size() const { return 2 * a.size() + 2 * d.size(); }

  /// Packs (a, a_dot, d, d_dot) into one vector, column-major for matrices.
  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);

  /// Throws unless shapes agree, L >= 1, M >= 2 and all entries are finite.
  void validate() const;
};

/// Kernel probabilities and derivatives at the expansion point.
/// beta(c, b) is the probability of endpoint b given mediator c.
struct KernelValues {
  Eigen::VectorXd alpha;
  Eigen::VectorXd alpha_dot;
  Eigen::MatrixXd beta;
  Eigen::MatrixXd beta_dot;
};

struct ModuleFis {
  double f_ac = 0.0;
  double f_cb = 0.0;
};

struct AdversaryEval {
  KernelValues kernels;
  ModuleFis modules;
  Eigen::VectorXd p_b;
  Eigen::VectorXd d1_p_b;
  Eigen::VectorXd d2_p_b;
  FisherMatrix f_b{Eigen::MatrixXd::Zero(2, 2)};
  double f_b_eff = 0.0;   // sum-direction effective information of f_b
  double gamma_adv = 0.0; // 0 when the benchmark is degenerate
  bool degenerate = false;
};

/// Module informations below this are treated as a degenerate benchmark.
inline constexpr double kDegenerateModuleFi = 1e-14;

KernelValues eval_kernels(const AdversaryParams& params);
ModuleFis module_fis(const KernelValues& kernels);
FisherMatrix endpoint_fim(const KernelValues& kernels);

/// Full forward pass. Never throws on a degenerate benchmark; check
/// `degenerate` instead.
AdversaryEval evaluate_adversary(const AdversaryParams& params);

/// Effective endpoint information over the harmonic module benchmark.
/// Throws DegenerateBenchmark when either module information is below
/// kDegenerateModuleFi.
double gamma_adv(const AdversaryParams& params);

/// Exact gradient of gamma_adv with respect to every logit and logit
/// derivative, in the same shape as the parameters. Throws like gamma_adv.
AdversaryParams gamma_adv_gradient(const AdversaryParams& params);

struct AdamOptions {
  double lr = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int steps = 2000;
  double init_scale = 1.0;
};

struct AscentTrace {
  AdversaryParams final_params;
  double initial_gamma = 0.0;
  double final_gamma = 0.0;
  double best_gamma = 0.0;
  std::vector<double> running_max;  // best-so-far after each evaluation
};

/// Adam ascent on Gamma_adv. Degenerate iterates score 0 with zero gradient.
AscentTrace adam_ascent(AdversaryParams init, const AdamOptions& options);

struct RestartResult {
  double best_gamma = 0.0;
  std::vector<double> per_restart;  // best value reached in each restart
  std::vector<double> initial;      // value at each initialization
  double max_evaluated = 0.0;       // largest value seen at any iterate
};

/// Independent Adam runs from random initializations; restart r draws its
/// initialization from stream r of `seed`, redrawing degenerate starts.
RestartResult optimize_restarts(int mediators, int outcomes, int n_restarts,
                                const AdamOptions& options, std::uint64_t seed);

}  // namespace cfii
