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

#include "cfii/fim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cfii/error.hpp"

namespace cfii {
namespace {

double entry_scale(const Eigen::MatrixXd& m) {
  return std::max(1.0, m.cwiseAbs().maxCoeff());
}

// Quadratic form u^T F^+ u together with the part of u outside the retained
// eigenspace.
struct PseudoQuadratic {
  double form = 0.0;
  double null_fraction = 0.0;
  bool empty = true;
};

PseudoQuadratic pseudo_quadratic(const Eigen::MatrixXd& f, const Eigen::VectorXd& u) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Eigen::MatrixXd& q = eig.eigenvectors();
  const double lambda_max = lambda.maxCoeff();
  PseudoQuadratic out;
  if (lambda_max <= 0.0) {
    out.null_fraction = 1.0;
    return out;
  }
  const double cutoff = kPseudoInverseCutoff * lambda_max;
  Eigen::VectorXd residual = u;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) <= cutoff) continue;
    const double proj = q.col(i).dot(u);
    out.form += proj * proj / lambda(i);
    residual -= proj * q.col(i);
    out.empty = false;
  }
  out.null_fraction = residual.norm() / u.norm();
  return out;
}

// Components of u this far outside the row space make the combination
// unidentifiable.
constexpr double kRowSpaceTolerance = 1e-8;

}  // namespace

FisherMatrix::FisherMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw DimensionMismatch("Fisher matrix must be square with dimension >= 1");
  }
  if (!entries_.allFinite()) throw InvalidArgument("Fisher matrix entries must be finite");
  const double scale = entry_scale(entries_);
  const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) throw InvalidArgument("Fisher matrix is not symmetric");
  entries_ = 0.5 * (entries_ + entries_.transpose()).eval();
  if (entries_.rows() > 1 || entries_(0, 0) < 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
      throw InvalidArgument("Fisher matrix is not positive semidefinite");
    }
  }
}

FisherMatrix FisherMatrix::diagonal(std::span<const double> entries) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) d(static_cast<Eigen::Index>(i)) = entries[i];
  return FisherMatrix(d.asDiagonal().toDenseMatrix());
}

FisherMatrix FisherMatrix::two_by_two(double f1, double f2, double synergy) {
  Eigen::Matrix2d m;
  m << f1, synergy, synergy, f2;
  return FisherMatrix(m);
}

Direction::Direction(Eigen::VectorXd u) : u_(std::move(u)) {
  if (u_.size() < 1) throw DimensionMismatch("direction must have dimension >= 1");
  if (!u_.allFinite()) throw InvalidArgument("direction entries must be finite");
  if (u_.cwiseAbs().maxCoeff() == 0.0) throw InvalidArgument("direction must be nonzero");
}

Direction Direction::all_ones(Eigen::Index dim) {
  return Direction(Eigen::VectorXd::Ones(dim));
}

Eigen::MatrixXd pseudo_inverse(const FisherMatrix& fisher) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fisher.matrix());
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double lambda_max = lambda.maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  if (lambda_max > 0.0) {
    const double cutoff = kPseudoInverseCutoff * lambda_max;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      if (lambda(i) > cutoff) inv(i) = 1.0 / lambda(i);
    }
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

double effective_fi(const FisherMatrix& fisher, const Direction& u) {
  if (fisher.dim() != u.dim()) {
    throw DimensionMismatch("direction has dimension " + std::to_string(u.dim()) +
                            ", Fisher matrix has " + std::to_string(fisher.dim()));
  }
  const Eigen::MatrixXd& f = fisher.matrix();
  const Eigen::VectorXd& v = u.vector();

  if (fisher.dim() == 1) {
    return f(0, 0) > 0.0 ? f(0, 0) / (v(0) * v(0)) : 0.0;
  }
  if (fisher.dim() == 2) {
    const double a = f(0, 0), c = f(0, 1), d = f(1, 1);
    const double det = a * d - c * c;
    const double trace = a + d;
    if (trace > 0.0 && det > kPseudoInverseCutoff * trace * trace) {
      const double form = (d * v(0) * v(0) - 2.0 * c * v(0) * v(1) + a * v(1) * v(1)) / det;
      return 1.0 / form;
    }
  } else {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(f);
    const Eigen::VectorXd diag = ldlt.vectorD();
    const double dmax = diag.cwiseAbs().maxCoeff();
    if (ldlt.info() == Eigen::Success && dmax > 0.0 &&
        diag.minCoeff() > kPseudoInverseCutoff * dmax) {
      return 1.0 / v.dot(ldlt.solve(v));
    }
  }

  const PseudoQuadratic pq = pseudo_quadratic(f, v);
  if (pq.empty || pq.null_fraction > kRowSpaceTolerance || pq.form <= 0.0) return 0.0;
  return 1.0 / pq.form;
}

double synergy_effective_fi(double f1, double f2, double synergy) {
  if (!(f1 > 0.0) || !(f2 > 0.0)) {
    throw NonPositiveFisherInformation("synergy formula requires F1, F2 > 0");
  }
  const double det = f1 * f2 - synergy * synergy;
  if (!(det > 0.0)) {
    throw NotPositiveDefinite("synergy formula requires F1 F2 - J^2 > 0");
  }
  return det / (f1 + f2 - 2.0 * synergy);
}

Interval synergy_window(double f1, double f2) {
  if (!(f1 > 0.0) || !(f2 > 0.0)) {
    throw NonPositiveFisherInformation("synergy window requires F1, F2 > 0");
  }
  return Interval{0.0, 2.0 * f1 * f2 / (f1 + f2)};
}

double harmonic_composition(std::span<const double> segment_fis) {
  if (segment_fis.empty()) throw InvalidArgument("need at least one segment");
  double resistance = 0.0;
  for (double f : segment_fis) {
    if (!(f > 0.0)) {
      throw NonPositiveFisherInformation("segment Fisher information must be positive");
    }
    resistance += 1.0 / f;
  }
  return 1.0 / resistance;
}

FisherMatrix equicorrelated_matrix(double fisher, double eps, int k) {
  if (k < 1) throw InvalidArgument("chain length must be >= 1");
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(k, k, eps * fisher);
  m.diagonal().setConstant(fisher);
  return FisherMatrix(std::move(m));
}

double equicorrelated_effective_fi(double fisher, double eps, int k) {
  if (k < 1) throw InvalidArgument("chain length must be >= 1");
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in [0, 1)");
  if (fisher < 0.0) throw InvalidArgument("Fisher information must be >= 0");
  return fisher * (eps + (1.0 - eps) / static_cast<double>(k));
}

CategoricalModel push_forward(const CategoricalModel& model,
                              const Eigen::MatrixXd& channel) {
  model.validate();
  const auto m = static_cast<Eigen::Index>(model.size());
  if (channel.rows() != m || channel.cols() < 1) {
    throw DimensionMismatch("channel must have one row per input outcome");
  }
  if (!channel.allFinite() || channel.minCoeff() < 0.0) {
    throw InvalidArgument("channel entries must be finite and nonnegative");
  }
  const Eigen::VectorXd row_sums = channel.rowwise().sum();
  if ((row_sums.array() - 1.0).abs().maxCoeff() > 1e-12) {
    throw InvalidArgument("channel rows must sum to 1");
  }
  const Eigen::Map<const Eigen::VectorXd> p(model.p.data(), m);
  const Eigen::Map<const Eigen::VectorXd> dp(model.p_dot.data(), m);
  const Eigen::VectorXd q = channel.transpose() * p;
  const Eigen::VectorXd dq = channel.transpose() * dp;
  return CategoricalModel{{q.data(), q.data() + q.size()},
                          {dq.data(), dq.data() + dq.size()}};
}

double coarse_grain_fi(const CategoricalModel& model, const Eigen::MatrixXd& channel) {
  CategoricalModel out = push_forward(model, channel);
  // A zero output probability can only come from zero inputs, which carry
  // zero derivative in a regular model; clear roundoff residue.
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.p[i] == 0.0) out.p_dot[i] = 0.0;
  }
  return categorical_fi(out);
}

}  // namespace cfii
