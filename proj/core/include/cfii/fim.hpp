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

#include <span>

#include <Eigen/Dense>

#include "cfii/models.hpp"

namespace cfii {

/// Relative eigenvalue cutoff used by every pseudoinverse in the library.
inline constexpr double kPseudoInverseCutoff = 1e-12;

/// Symmetric positive-semidefinite information matrix.
///
/// Construction checks symmetry to 1e-12 and PSD-ness to -1e-10, both
/// relative to max(1, largest |entry|), and symmetrizes the stored copy.
class FisherMatrix {
 public:
  explicit FisherMatrix(Eigen::MatrixXd entries);

  static FisherMatrix diagonal(std::span<const double> entries);
  static FisherMatrix two_by_two(double f1, double f2, double synergy);

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

 private:
  Eigen::MatrixXd entries_;
};

/// Linear parameter combination u^T theta. Never the zero vector.
class Direction {
 public:
  explicit Direction(Eigen::VectorXd u);
  static Direction all_ones(Eigen::Index dim);

  Eigen::Index dim() const { return u_.size(); }
  const Eigen::VectorXd& vector() const { return u_; }

 private:
  Eigen::VectorXd u_;
};

/// Moore-Penrose inverse via a symmetric eigendecomposition; eigenvalues at
/// or below kPseudoInverseCutoff * lambda_max are dropped.
Eigen::MatrixXd pseudo_inverse(const FisherMatrix& fisher);

/// (u^T F^+ u)^{-1}. Zero when u has a component outside the row space of F
/// (the combination is not identifiable, so its resistance is infinite).
double effective_fi(const FisherMatrix& fisher, const Direction& u);

/// Effective information for theta_1 + theta_2 from a 2x2 matrix with
/// diagonal (F1, F2) and off-diagonal synergy J.
double synergy_effective_fi(double f1, double f2, double synergy);

/// Open interval of J for which the synergy formula beats (1/F1 + 1/F2)^{-1}.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo < x && x < hi; }
};
Interval synergy_window(double f1, double f2);

/// (sum_j 1/F_j)^{-1}: the series composition of segment informations.
/// Throws NonPositiveFisherInformation unless every entry is positive.
double harmonic_composition(std::span<const double> segment_fis);

/// K x K matrix with F on the diagonal and eps * F everywhere else.
FisherMatrix equicorrelated_matrix(double fisher, double eps, int k);

/// Closed form F (eps + (1 - eps)/K) of the all-ones effective information
/// of equicorrelated_matrix.
double equicorrelated_effective_fi(double fisher, double eps, int k);

/// Information left after pushing a categorical model through a
/// row-stochastic channel (rows index inputs, columns outputs).
double coarse_grain_fi(const CategoricalModel& model, const Eigen::MatrixXd& channel);

CategoricalModel push_forward(const CategoricalModel& model,
                              const Eigen::MatrixXd& channel);

}  // namespace cfii
