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

#include <numbers>
#include <vector>

namespace cfii {

inline constexpr double kPi = std::numbers::pi;

/// Below this value of 1 - z^2 a binary fringe is treated as sitting on a
/// turning point and the Fisher information is taken from the continuous
/// extension.
inline constexpr double kRemovableTolerance = 1e-12;

/// Bloch angles of a pure single-qubit probe.
///
/// The probe is rotated about x by the parameter and read out in the z basis.
/// `vartheta` is clamped to [0, pi] and `varphi` is wrapped into [0, 2pi).
struct QubitPreparation {
  double vartheta = 0.0;
  double varphi = kPi / 2;

  static QubitPreparation make(double vartheta, double varphi);
  /// The constant-information preparation varphi = pi/2.
  static QubitPreparation deterministic(double vartheta = 0.0) {
    return make(vartheta, kPi / 2);
  }
};

/// Dephased fringe with symmetric readout error:
///   z(theta) = (1 - 2 eps_r) exp(-gamma theta) cos(theta - vartheta0).
struct NoisyFringeParams {
  double vartheta0 = 0.0;
  double gamma = 0.0;
  double epsilon_r = 0.0;

  static NoisyFringeParams make(double vartheta0, double gamma, double epsilon_r);
  double eta_r() const { return 1.0 - 2.0 * epsilon_r; }
};

/// One-parameter binary outcome model written through its Bloch component,
///   p0 = (1 + z) / 2,  p1 = (1 - z) / 2.
///
/// Implementations supply z and its first two derivatives. Those with a
/// cancellation-free expression for 1 - z^2 should override one_minus_z2,
/// which controls the accuracy of fi() near the turning points z = +-1.
class BinaryModel {
 public:
  virtual ~BinaryModel() = default;

  virtual double z(double theta) const = 0;
  virtual double z_dot(double theta) const = 0;
  virtual double z_ddot(double theta) const = 0;
  virtual double one_minus_z2(double theta) const;

  double p0(double theta) const;
  /// Computed as 1 - p0 so that p0 + p1 == 1 exactly in floating point.
  double p1(double theta) const { return 1.0 - p0(theta); }
  double probability(int x, double theta) const {
    return x == 0 ? p0(theta) : p1(theta);
  }

  /// d/dtheta log p_x(theta). Throws DegenerateProbability when p_x = 0.
  double score(int x, double theta) const;

  /// Fisher information z'^2 / (1 - z^2). At a turning point where both
  /// z' and 1 - z^2 vanish the removable limit |z''| is returned; a turning
  /// point with z' != 0 is irregular and yields +inf.
  double fi(double theta) const;
};

/// Ideal x-rotated qubit: z = cos(vt) cos(theta) + sin(vt) sin(vp) sin(theta).
class QubitFringe final : public BinaryModel {
 public:
  explicit QubitFringe(QubitPreparation prep = {});

  double z(double theta) const override;
  double z_dot(double theta) const override;
  double z_ddot(double theta) const override { return -z(theta); }
  /// 1 - z^2 = z'^2 + (sin(vt) cos(vp))^2.
  double one_minus_z2(double theta) const override;

  const QubitPreparation& preparation() const { return prep_; }

 private:
  QubitPreparation prep_;
  double cos_vt_;
  double sin_vt_sin_vp_;
  double residual_;  // (sin(vt) cos(vp))^2
};

class NoisyFringe final : public BinaryModel {
 public:
  explicit NoisyFringe(NoisyFringeParams params);

  double z(double theta) const override;
  double z_dot(double theta) const override;
  double z_ddot(double theta) const override;
  double one_minus_z2(double theta) const override;

  const NoisyFringeParams& params() const { return params_; }

 private:
  NoisyFringeParams params_;
};

/// z = cos(rate * (theta - offset)); Fisher information is rate^2 everywhere.
class ConstantFiFringe final : public BinaryModel {
 public:
  explicit ConstantFiFringe(double fisher_information, double offset = 0.0);

  double z(double theta) const override;
  double z_dot(double theta) const override;
  double z_ddot(double theta) const override;
  double one_minus_z2(double theta) const override;

 private:
  double rate_;
  double offset_;
};

double qubit_z(double theta, const QubitPreparation& prep);
double qubit_fi(double theta, const QubitPreparation& prep);
double noisy_z(double theta, const NoisyFringeParams& params);
double noisy_fi(double theta, const NoisyFringeParams& params);
double binary_score(int x, double theta, const BinaryModel& model);

/// Local finite categorical model: probabilities and their parameter
/// derivatives at one expansion point.
struct CategoricalModel {
  std::vector<double> p;
  std::vector<double> p_dot;

  std::size_t size() const { return p.size(); }
  /// Throws InvalidArgument unless sum p = 1, sum p_dot = 0 and p >= 0.
  void validate() const;
};

/// sum_x p_dot_x^2 / p_x. Outcomes with p_x = 0 contribute nothing when
/// p_dot_x = 0 and raise IrregularModel otherwise.
double categorical_fi(const CategoricalModel& model);

CategoricalModel to_categorical(const BinaryModel& model, double theta);

/// Joint model of two independent outcomes that share the parameter:
/// p(x, y) = p(x) q(y), laid out row-major in (x, y).
CategoricalModel independent_product(const CategoricalModel& first,
                                     const CategoricalModel& second);

}  // namespace cfii
