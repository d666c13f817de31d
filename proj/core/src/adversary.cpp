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

#include "cfii/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cfii/error.hpp"
#include "cfii/parallel.hpp"

namespace cfii {
namespace {

// Softmax of logits s and its tangent along logit derivatives ds.
void softmax_tangent(const Eigen::VectorXd& s, const Eigen::VectorXd& ds, Eigen::VectorXd& p,
                     Eigen::VectorXd& dp) {
  const double shift = s.maxCoeff();
  p = (s.array() - shift).exp();
  p /= p.sum();
  const double mean_ds = p.dot(ds);
  dp = p.array() * (ds.array() - mean_ds);
}

// Reverse pass through softmax_tangent: given adjoints of (p, dp), returns
// adjoints of (s, ds).
void softmax_tangent_adjoint(const Eigen::VectorXd& p, const Eigen::VectorXd& dp,
                             const Eigen::VectorXd& p_bar, const Eigen::VectorXd& dp_bar,
                             Eigen::VectorXd& s_bar, Eigen::VectorXd& ds_bar) {
  const double mean_p_bar = p.dot(p_bar);
  const double mean_dp_bar = p.dot(dp_bar);
  const double cross = dp_bar.dot(dp);
  s_bar = p.array() * (p_bar.array() - mean_p_bar) + dp.array() * dp_bar.array() -
          p.array() * cross - dp.array() * mean_dp_bar;
  ds_bar = p.array() * (dp_bar.array() - mean_dp_bar);
}

// F^+ u for a 2x2 PSD matrix, and whether u lies in its row space.
struct SumDirectionSolve {
  Eigen::Vector2d w = Eigen::Vector2d::Zero();
  double f_eff = 0.0;
};

SumDirectionSolve solve_sum_direction(const FisherMatrix& f) {
  SumDirectionSolve out;
  out.f_eff = effective_fi(f, Direction::all_ones(2));
  if (out.f_eff <= 0.0) return out;
  const Eigen::Vector2d u = Eigen::Vector2d::Ones();
  const Eigen::Matrix2d m = f.matrix();
  const double det = m.determinant();
  const double trace = m.trace();
  if (det > kPseudoInverseCutoff * trace * trace) {
    out.w = m.inverse() * u;
  } else {
    out.w = pseudo_inverse(f) * u;
  }
  return out;
}

}  // namespace

AdversaryParams AdversaryParams::zeros(int mediators, int outcomes) {
  if (mediators < 1 || outcomes < 2) {
    throw InvalidArgument("adversary needs L >= 1 mediator values and M >= 2 outcomes");
  }
  AdversaryParams p;
  p.a = Eigen::VectorXd::Zero(mediators);
  p.a_dot = Eigen::VectorXd::Zero(mediators);
  p.d = Eigen::MatrixXd::Zero(mediators, outcomes);
  p.d_dot = Eigen::MatrixXd::Zero(mediators, outcomes);
  return p;
}

AdversaryParams AdversaryParams::random(int mediators, int outcomes, CounterRng& rng,
                                        double scale) {
  AdversaryParams p = zeros(mediators, outcomes);
  Eigen::VectorXd flat(p.size());
  for (Eigen::Index i = 0; i < flat.size(); ++i) flat(i) = scale * rng.normal();
  p.assign(flat);
  return p;
}

Eigen::VectorXd AdversaryParams::flatten() const {
  Eigen::VectorXd flat(size());
  const Eigen::Index l = a.size();
  const Eigen::Index lm = d.size();
  flat.segment(0, l) = a;
  flat.segment(l, l) = a_dot;
  flat.segment(2 * l, lm) = d.reshaped();
  flat.segment(2 * l + lm, lm) = d_dot.reshaped();
  return flat;
}

void AdversaryParams::assign(const Eigen::VectorXd& flat) {
  if (flat.size() != size()) throw DimensionMismatch("flat parameter vector has wrong size");
  const Eigen::Index l = a.size();
  const Eigen::Index lm = d.size();
  a = flat.segment(0, l);
  a_dot = flat.segment(l, l);
  d = flat.segment(2 * l, lm).reshaped(d.rows(), d.cols());
  d_dot = flat.segment(2 * l + lm, lm).reshaped(d.rows(), d.cols());
}

void AdversaryParams::validate() const {
  if (a.size() < 1 || d.cols() < 2) {
    throw InvalidArgument("adversary needs L >= 1 mediator values and M >= 2 outcomes");
  }
  if (a_dot.size() != a.size() || d.rows() != a.size() || d_dot.rows() != d.rows() ||
      d_dot.cols() != d.cols()) {
    throw DimensionMismatch("adversary parameter shapes disagree");
  }
  if (!a.allFinite() || !a_dot.allFinite() || !d.allFinite() || !d_dot.allFinite()) {
    throw InvalidArgument("adversary parameters must be finite");
  }
}

KernelValues eval_kernels(const AdversaryParams& params) {
  params.validate();
  KernelValues k;
  softmax_tangent(params.a, params.a_dot, k.alpha, k.alpha_dot);
  const Eigen::Index l = params.d.rows();
  const Eigen::Index m = params.d.cols();
  k.beta.resize(l, m);
  k.beta_dot.resize(l, m);
  Eigen::VectorXd row, drow;
  for (Eigen::Index c = 0; c < l; ++c) {
    softmax_tangent(params.d.row(c).transpose(), params.d_dot.row(c).transpose(), row, drow);
    k.beta.row(c) = row.transpose();
    k.beta_dot.row(c) = drow.transpose();
  }
  return k;
}

ModuleFis module_fis(const KernelValues& k) {
  ModuleFis f;
  f.f_ac = (k.alpha_dot.array().square() / k.alpha.array()).sum();
  const Eigen::VectorXd per_mediator =
      (k.beta_dot.array().square() / k.beta.array()).rowwise().sum();
  f.f_cb = k.alpha.dot(per_mediator);
  return f;
}

namespace {

struct EndpointMarginal {
  Eigen::VectorXd p, d1, d2;
};

EndpointMarginal endpoint_marginal(const KernelValues& k) {
  return {k.beta.transpose() * k.alpha, k.beta.transpose() * k.alpha_dot,
          k.beta_dot.transpose() * k.alpha};
}

FisherMatrix fim_from_marginal(const EndpointMarginal& e) {
  const Eigen::ArrayXd inv_p = e.p.array().inverse();
  Eigen::Matrix2d f;
  f(0, 0) = (e.d1.array().square() * inv_p).sum();
  f(1, 1) = (e.d2.array().square() * inv_p).sum();
  f(0, 1) = f(1, 0) = (e.d1.array() * e.d2.array() * inv_p).sum();
  return FisherMatrix(f);
}

}  // namespace

FisherMatrix endpoint_fim(const KernelValues& kernels) {
  return fim_from_marginal(endpoint_marginal(kernels));
}

AdversaryEval evaluate_adversary(const AdversaryParams& params) {
  AdversaryEval ev;
  ev.kernels = eval_kernels(params);
  ev.modules = module_fis(ev.kernels);
  const EndpointMarginal marginal = endpoint_marginal(ev.kernels);
  ev.p_b = marginal.p;
  ev.d1_p_b = marginal.d1;
  ev.d2_p_b = marginal.d2;
  ev.f_b = fim_from_marginal(marginal);
  ev.f_b_eff = effective_fi(ev.f_b, Direction::all_ones(2));
  ev.degenerate = ev.modules.f_ac < kDegenerateModuleFi || ev.modules.f_cb < kDegenerateModuleFi;
  if (!ev.degenerate) {
    ev.gamma_adv = ev.f_b_eff * (1.0 / ev.modules.f_ac + 1.0 / ev.modules.f_cb);
  }
  return ev;
}

double gamma_adv(const AdversaryParams& params) {
  const AdversaryEval ev = evaluate_adversary(params);
  if (ev.degenerate) {
    throw DegenerateBenchmark("module Fisher information below threshold: F_ac = " +
                              std::to_string(ev.modules.f_ac) +
                              ", F_cb = " + std::to_string(ev.modules.f_cb));
  }
  return ev.gamma_adv;
}

AdversaryParams gamma_adv_gradient(const AdversaryParams& params) {
  const AdversaryEval ev = evaluate_adversary(params);
  if (ev.degenerate) {
    throw DegenerateBenchmark("gradient undefined: degenerate module benchmark");
  }
  const KernelValues& k = ev.kernels;
  const double f_ac = ev.modules.f_ac;
  const double f_cb = ev.modules.f_cb;
  const double resistance = 1.0 / f_ac + 1.0 / f_cb;

  // d F_eff = F_eff^2 (w^T dF w) with w = F^+ u.
  const SumDirectionSolve solve = solve_sum_direction(ev.f_b);
  const double fe = solve.f_eff;
  const double scale = resistance * fe * fe;
  const double g_a = scale * solve.w(0) * solve.w(0);
  const double g_c = scale * 2.0 * solve.w(0) * solve.w(1);
  const double g_d = scale * solve.w(1) * solve.w(1);
  const double w_ac = -fe / (f_ac * f_ac);
  const double w_cb = -fe / (f_cb * f_cb);

  const Eigen::ArrayXd p = ev.p_b.array();
  const Eigen::ArrayXd q1 = ev.d1_p_b.array();
  const Eigen::ArrayXd q2 = ev.d2_p_b.array();
  const Eigen::VectorXd p_bar =
      (-(g_a * q1.square() + g_c * q1 * q2 + g_d * q2.square()) / p.square()).matrix();
  const Eigen::VectorXd q1_bar = ((2.0 * g_a * q1 + g_c * q2) / p).matrix();
  const Eigen::VectorXd q2_bar = ((2.0 * g_d * q2 + g_c * q1) / p).matrix();

  const Eigen::ArrayXd alpha = k.alpha.array();
  const Eigen::ArrayXd alpha_dot = k.alpha_dot.array();
  const Eigen::ArrayXXd beta = k.beta.array();
  const Eigen::ArrayXXd beta_dot = k.beta_dot.array();
  const Eigen::ArrayXd per_mediator = (beta_dot.square() / beta).rowwise().sum();

  const Eigen::VectorXd alpha_bar =
      k.beta * p_bar + k.beta_dot * q2_bar +
      (w_ac * (-alpha_dot.square() / alpha.square()) + w_cb * per_mediator).matrix();
  const Eigen::VectorXd alpha_dot_bar =
      k.beta * q1_bar + (w_ac * 2.0 * alpha_dot / alpha).matrix();
  const Eigen::MatrixXd beta_bar =
      k.alpha * p_bar.transpose() + k.alpha_dot * q1_bar.transpose() +
      (-w_cb * ((beta_dot.square() / beta.square()).colwise() * alpha)).matrix();
  const Eigen::MatrixXd beta_dot_bar =
      k.alpha * q2_bar.transpose() +
      (2.0 * w_cb * ((beta_dot / beta).colwise() * alpha)).matrix();

  AdversaryParams grad = AdversaryParams::zeros(params.mediators(), params.outcomes());
  Eigen::VectorXd s_bar, ds_bar;
  softmax_tangent_adjoint(k.alpha, k.alpha_dot, alpha_bar, alpha_dot_bar, s_bar, ds_bar);
  grad.a = s_bar;
  grad.a_dot = ds_bar;
  for (Eigen::Index c = 0; c < k.beta.rows(); ++c) {
    softmax_tangent_adjoint(k.beta.row(c).transpose(), k.beta_dot.row(c).transpose(),
                            beta_bar.row(c).transpose(), beta_dot_bar.row(c).transpose(), s_bar,
                            ds_bar);
    grad.d.row(c) = s_bar.transpose();
    grad.d_dot.row(c) = ds_bar.transpose();
  }
  grad.theta1_0 = params.theta1_0;
  grad.theta2_0 = params.theta2_0;
  return grad;
}

AscentTrace adam_ascent(AdversaryParams init, const AdamOptions& options) {
  if (options.steps < 0) throw InvalidArgument("step count must be >= 0");
  AscentTrace trace;
  Eigen::VectorXd x = init.flatten();
  Eigen::VectorXd m1 = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(x.size());
  AdversaryParams current = std::move(init);
  trace.running_max.reserve(static_cast<std::size_t>(options.steps) + 1);

  auto record = [&](double g) {
    trace.best_gamma = trace.running_max.empty() ? g : std::max(trace.best_gamma, g);
    trace.running_max.push_back(trace.best_gamma);
  };

  double gamma = evaluate_adversary(current).gamma_adv;
  trace.initial_gamma = gamma;
  record(gamma);
  for (int t = 1; t <= options.steps; ++t) {
    const AdversaryEval ev = evaluate_adversary(current);
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(x.size());
    if (!ev.degenerate) grad = gamma_adv_gradient(current).flatten();
    m1 = options.beta1 * m1 + (1.0 - options.beta1) * grad;
    m2 = options.beta2 * m2 + (1.0 - options.beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(options.beta1, t);
    const double c2 = 1.0 - std::pow(options.beta2, t);
    x.array() += options.lr * (m1.array() / c1) / ((m2.array() / c2).sqrt() + options.eps);
    current.assign(x);
    gamma = evaluate_adversary(current).gamma_adv;
    record(gamma);
  }
  trace.final_gamma = gamma;
  trace.final_params = std::move(current);
  return trace;
}

namespace {
constexpr int kMaxInitDraws = 1000;
}  // namespace

RestartResult optimize_restarts(int mediators, int outcomes, int n_restarts,
                                const AdamOptions& options, std::uint64_t seed) {
  if (n_restarts < 1) throw InvalidArgument("need at least one restart");
  AdversaryParams::zeros(mediators, outcomes);  // validates the shape
  const CounterRng root(seed);
  const auto n = static_cast<std::size_t>(n_restarts);
  std::vector<AscentTrace> traces(n);
  parallel_for(n, [&](std::size_t r) {
    CounterRng rng = root.split(r);
    AdversaryParams init = AdversaryParams::random(mediators, outcomes, rng, options.init_scale);
    int draws = 1;
    while (evaluate_adversary(init).degenerate) {
      if (++draws > kMaxInitDraws) {
        throw DegenerateBenchmark("no non-degenerate initialization after " +
                                  std::to_string(kMaxInitDraws) + " draws");
      }
      init = AdversaryParams::random(mediators, outcomes, rng, options.init_scale);
    }
    traces[r] = adam_ascent(std::move(init), options);
  });

  RestartResult out;
  for (const AscentTrace& t : traces) {
    out.per_restart.push_back(t.best_gamma);
    out.initial.push_back(t.initial_gamma);
    out.max_evaluated = std::max(out.max_evaluated, t.best_gamma);
  }
  out.best_gamma = out.max_evaluated;
  return out;
}

}  // namespace cfii
