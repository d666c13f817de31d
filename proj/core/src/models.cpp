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

#include "cfii/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cfii/error.hpp"

namespace cfii {
namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw InvalidArgument(std::string(what) + " must be finite");
  }
}

}  // namespace

QubitPreparation QubitPreparation::make(double vartheta, double varphi) {
  require_finite(vartheta, "vartheta");
  require_finite(varphi, "varphi");
  QubitPreparation prep;
  prep.vartheta = std::clamp(vartheta, 0.0, kPi);
  double wrapped = std::fmod(varphi, 2.0 * kPi);
  if (wrapped < 0.0) wrapped += 2.0 * kPi;
  prep.varphi = wrapped;
  return prep;
}

NoisyFringeParams NoisyFringeParams::make(double vartheta0, double gamma,
                                          double epsilon_r) {
  require_finite(vartheta0, "vartheta0");
  require_finite(gamma, "gamma");
  require_finite(epsilon_r, "epsilon_r");
  if (gamma < 0.0) throw InvalidArgument("gamma must be >= 0");
  if (epsilon_r < 0.0 || epsilon_r >= 0.5) {
    throw InvalidArgument("epsilon_r must lie in [0, 1/2)");
  }
  return NoisyFringeParams{vartheta0, gamma, epsilon_r};
}

double BinaryModel::one_minus_z2(double theta) const {
  const double v = z(theta);
  return (1.0 - v) * (1.0 + v);
}

double BinaryModel::p0(double theta) const {
  return std::clamp(0.5 * (1.0 + z(theta)), 0.0, 1.0);
}

double BinaryModel::score(int x, double theta) const {
  if (x != 0 && x != 1) throw InvalidArgument("binary outcome must be 0 or 1");
  if (probability(x, theta) <= 0.0) {
    throw DegenerateProbability("score undefined: outcome " + std::to_string(x) +
                                " has zero probability");
  }
  const double v = z(theta);
  const double dv = z_dot(theta);
  return x == 0 ? dv / (1.0 + v) : -dv / (1.0 - v);
}

double BinaryModel::fi(double theta) const {
  const double dv = z_dot(theta);
  const double num = dv * dv;
  const double den = one_minus_z2(theta);
  if (den < kRemovableTolerance) {
    const double curvature = std::abs(z_ddot(theta));
    if (num <= kRemovableTolerance * std::max(1.0, curvature)) return curvature;
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
  }
  return num / den;
}

QubitFringe::QubitFringe(QubitPreparation prep)
    : prep_(QubitPreparation::make(prep.vartheta, prep.varphi)),
      cos_vt_(std::cos(prep_.vartheta)),
      sin_vt_sin_vp_(std::sin(prep_.vartheta) * std::sin(prep_.varphi)) {
  const double off_plane = std::sin(prep_.vartheta) * std::cos(prep_.varphi);
  residual_ = off_plane * off_plane;
}

double QubitFringe::z(double theta) const {
  return cos_vt_ * std::cos(theta) + sin_vt_sin_vp_ * std::sin(theta);
}

double QubitFringe::z_dot(double theta) const {
  return -cos_vt_ * std::sin(theta) + sin_vt_sin_vp_ * std::cos(theta);
}

double QubitFringe::one_minus_z2(double theta) const {
  const double dv = z_dot(theta);
  return dv * dv + residual_;
}

NoisyFringe::NoisyFringe(NoisyFringeParams params)
    : params_(NoisyFringeParams::make(params.vartheta0, params.gamma,
                                      params.epsilon_r)) {}

double NoisyFringe::z(double theta) const {
  return params_.eta_r() * std::exp(-params_.gamma * theta) *
         std::cos(theta - params_.vartheta0);
}

double NoisyFringe::z_dot(double theta) const {
  const double u = theta - params_.vartheta0;
  return -params_.eta_r() * std::exp(-params_.gamma * theta) *
         (params_.gamma * std::cos(u) + std::sin(u));
}

double NoisyFringe::z_ddot(double theta) const {
  const double u = theta - params_.vartheta0;
  const double g = params_.gamma;
  return params_.eta_r() * std::exp(-g * theta) *
         ((g * g - 1.0) * std::cos(u) + 2.0 * g * std::sin(u));
}

double NoisyFringe::one_minus_z2(double theta) const {
  // With a = eta exp(-gamma theta): 1 - z^2 = (1 - a)(1 + a) + a^2 sin^2(u),
  // and 1 - a = 2 eps + eta (1 - exp(-gamma theta)) has no cancellation.
  const double eta = params_.eta_r();
  const double decay = std::exp(-params_.gamma * theta);
  const double a = eta * decay;
  const double one_minus_a =
      2.0 * params_.epsilon_r - eta * std::expm1(-params_.gamma * theta);
  const double s = std::sin(theta - params_.vartheta0);
  return one_minus_a * (1.0 + a) + a * a * s * s;
}

ConstantFiFringe::ConstantFiFringe(double fisher_information, double offset)
    : offset_(offset) {
  require_finite(fisher_information, "fisher_information");
  require_finite(offset, "offset");
  if (fisher_information <= 0.0) {
    throw InvalidArgument("constant Fisher information must be positive");
  }
  rate_ = std::sqrt(fisher_information);
}

double ConstantFiFringe::z(double theta) const {
  return std::cos(rate_ * (theta - offset_));
}

double ConstantFiFringe::z_dot(double theta) const {
  return -rate_ * std::sin(rate_ * (theta - offset_));
}

double ConstantFiFringe::z_ddot(double theta) const {
  return -rate_ * rate_ * z(theta);
}

double ConstantFiFringe::one_minus_z2(double theta) const {
  const double s = std::sin(rate_ * (theta - offset_));
  return s * s;
}

double qubit_z(double theta, const QubitPreparation& prep) {
  return QubitFringe(prep).z(theta);
}

double qubit_fi(double theta, const QubitPreparation& prep) {
  return QubitFringe(prep).fi(theta);
}

double noisy_z(double theta, const NoisyFringeParams& params) {
  return NoisyFringe(params).z(theta);
}

double noisy_fi(double theta, const NoisyFringeParams& params) {
  return NoisyFringe(params).fi(theta);
}

double binary_score(int x, double theta, const BinaryModel& model) {
  return model.score(x, theta);
}

void CategoricalModel::validate() const {
  if (p.empty()) throw InvalidArgument("categorical model needs at least one outcome");
  if (p.size() != p_dot.size()) {
    throw DimensionMismatch("probability and derivative vectors differ in length");
  }
  const double tol = 1e-10 * static_cast<double>(p.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || !std::isfinite(p_dot[i])) {
      throw InvalidArgument("categorical model entries must be finite");
    }
    if (p[i] < 0.0) throw InvalidArgument("probabilities must be nonnegative");
    scale = std::max(scale, std::abs(p_dot[i]));
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(total - 1.0) > tol) {
    throw InvalidArgument("probabilities must sum to 1");
  }
  const double drift = std::accumulate(p_dot.begin(), p_dot.end(), 0.0);
  if (std::abs(drift) > tol * std::max(1.0, scale)) {
    throw InvalidArgument("probability derivatives must sum to 0");
  }
}

double categorical_fi(const CategoricalModel& model) {
  model.validate();
  double fi = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const double p = model.p[i];
    const double dp = model.p_dot[i];
    if (p == 0.0) {
      if (dp != 0.0) {
        throw IrregularModel("outcome " + std::to_string(i) +
                             " has zero probability but nonzero derivative");
      }
      continue;
    }
    fi += dp * dp / p;
  }
  return fi;
}

CategoricalModel to_categorical(const BinaryModel& model, double theta) {
  const double p0 = model.p0(theta);
  const double dp0 = 0.5 * model.z_dot(theta);
  return CategoricalModel{{p0, 1.0 - p0}, {dp0, -dp0}};
}

CategoricalModel independent_product(const CategoricalModel& first,
                                     const CategoricalModel& second) {
  first.validate();
  second.validate();
  CategoricalModel joint;
  joint.p.reserve(first.size() * second.size());
  joint.p_dot.reserve(first.size() * second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (std::size_t j = 0; j < second.size(); ++j) {
      joint.p.push_back(first.p[i] * second.p[j]);
      joint.p_dot.push_back(first.p_dot[i] * second.p[j] +
                            first.p[i] * second.p_dot[j]);
    }
  }
  return joint;
}

}  // namespace cfii
