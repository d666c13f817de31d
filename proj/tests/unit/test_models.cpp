#include "cfii/models.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cfii/error.hpp"
#include "oracles.hpp"

using namespace cfii;

namespace {

const NoisyFringeParams kNoisy = NoisyFringeParams::make(0.0, 0.25, 0.02);
const QubitPreparation kGeneric = QubitPreparation::make(0.7 * kPi, 0.3 * kPi);

}  // namespace

TEST(QubitPreparation, ClampsAndWraps) {
  const auto p = QubitPreparation::make(4.0, -kPi / 2);
  EXPECT_DOUBLE_EQ(p.vartheta, kPi);
  EXPECT_NEAR(p.varphi, 1.5 * kPi, 1e-15);
  EXPECT_THROW(QubitPreparation::make(NAN, 0.0), InvalidArgument);
}

TEST(NoisyFringeParams, RejectsOutOfRange) {
  EXPECT_THROW(NoisyFringeParams::make(0.0, -0.1, 0.0), InvalidArgument);
  EXPECT_THROW(NoisyFringeParams::make(0.0, 0.1, 0.5), InvalidArgument);
  EXPECT_DOUBLE_EQ(kNoisy.eta_r(), 0.96);
}

TEST(QubitZ, Examples) {
  EXPECT_DOUBLE_EQ(qubit_z(0.0, QubitPreparation::make(0.0, kPi / 2)), 1.0);
  for (double vt : {0.0, 0.4, 1.3, 2.9}) {
    for (double t : {-1.0, 0.2, 2.5, 5.0}) {
      EXPECT_NEAR(qubit_z(t, QubitPreparation::deterministic(vt)), std::cos(t - vt), 1e-15);
    }
  }
  // 40-digit evaluation of the closed form.
  EXPECT_NEAR(qubit_z(1.0, kGeneric), 0.23316818252457047960, 1e-15);
}

TEST(QubitFi, DeterministicPointIsConstant) {
  const QubitPreparation prep = QubitPreparation::deterministic(0.9);
  for (int i = 0; i <= 10000; ++i) {
    const double theta = -4.0 + 12.0 * i / 10000.0;
    EXPECT_NEAR(qubit_fi(theta, prep), 1.0, 1e-10) << "theta = " << theta;
  }
}

TEST(QubitFi, RemovableSingularity) {
  for (double vt : {0.0, 0.5, 1.0, kPi}) {
    const auto prep = QubitPreparation::deterministic(vt);
    EXPECT_NEAR(qubit_z(vt, prep), 1.0, 1e-15);
    EXPECT_NEAR(qubit_fi(vt, prep), 1.0, 1e-10);
    EXPECT_NEAR(qubit_fi(vt + kPi, prep), 1.0, 1e-10);
    EXPECT_NEAR(qubit_fi(vt + 1e-9, prep), 1.0, 1e-10);
  }
}

TEST(QubitFi, GenericPointMatchesFiniteDifferences) {
  const QubitFringe model(kGeneric);
  EXPECT_NEAR(model.fi(1.0), oracle::finite_difference_fi(model, 1.0), 1e-7);
  EXPECT_NEAR(model.fi(1.0), 0.76087211395024555777, 1e-14);
}

TEST(NoisyZ, Examples) {
  EXPECT_NEAR(noisy_z(kPi / 2, kNoisy), 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(noisy_z(0.0, NoisyFringeParams{}), 1.0);
  EXPECT_NEAR(noisy_z(kPi / 8, kNoisy), 0.80398846505297626, 1e-15);
}

TEST(NoisyFi, ReportedValues) {
  EXPECT_NEAR(noisy_fi(kPi / 2, kNoisy), 0.4202, 5e-4);
  EXPECT_NEAR(noisy_fi(kPi / 8, kNoisy), 0.8065, 5e-4);
  for (double t : {0.0, 0.3, 1.0, kPi, 4.0}) {
    EXPECT_NEAR(noisy_fi(t, NoisyFringeParams{}), 1.0, 1e-10);
  }
}

TEST(NoisyFi, MatchesFiniteDifferences) {
  const NoisyFringe model(NoisyFringeParams::make(0.3, 0.4, 0.05));
  for (double t : {0.1, 0.7, 1.5, 2.2, 3.0}) {
    EXPECT_NEAR(model.fi(t), oracle::finite_difference_fi(model, t), 1e-7);
  }
}

TEST(NoisyFi, IrregularTurningPointIsInfinite) {
  // eps_r = 0 and gamma > 0: z(0) = 1 with z'(0) = -gamma.
  EXPECT_TRUE(std::isinf(noisy_fi(0.0, NoisyFringeParams::make(0.0, 0.3, 0.0))));
}

TEST(BinaryScore, MidFringe) {
  const QubitFringe model(QubitPreparation::deterministic(0.0));
  EXPECT_NEAR(binary_score(0, kPi / 2, model), -1.0, 1e-15);
  EXPECT_NEAR(binary_score(1, kPi / 2, model), 1.0, 1e-15);
}

TEST(BinaryScore, NoisyMatchesFiniteDifference) {
  const NoisyFringe model(kNoisy);
  const double fd = oracle::central_difference(
      [&](double t) { return std::log(model.p0(t)); }, kPi / 8, 1e-6);
  EXPECT_NEAR(binary_score(0, kPi / 8, model), fd, 1e-8);
  EXPECT_NEAR(binary_score(0, kPi / 8, model), -0.29602187199352844, 1e-14);
}

TEST(BinaryScore, ZeroProbabilityOutcomeThrows) {
  const QubitFringe model(QubitPreparation::deterministic(0.0));
  EXPECT_THROW(model.score(1, 0.0), DegenerateProbability);
  EXPECT_THROW(model.score(2, 0.5), InvalidArgument);
}

TEST(BinaryModel, GridInvariants) {
  const QubitFringe qubit(kGeneric);
  const NoisyFringe noisy(kNoisy);
  for (const BinaryModel* model : {static_cast<const BinaryModel*>(&qubit),
                                   static_cast<const BinaryModel*>(&noisy)}) {
    for (int i = 0; i < 10000; ++i) {
      const double theta = 0.001 + 6.0 * i / 10000.0;
      const double p0 = model->p0(theta);
      const double p1 = model->p1(theta);
      ASSERT_EQ(p0 + p1, 1.0);
      ASSERT_GE(p0, 0.0);
      ASSERT_GE(p1, 0.0);
      const double s0 = model->score(0, theta);
      const double s1 = model->score(1, theta);
      ASSERT_LT(std::abs(p0 * s0 + p1 * s1), 1e-12) << theta;
      ASSERT_NEAR(model->fi(theta), p0 * s0 * s0 + p1 * s1 * s1, 1e-12) << theta;
    }
  }
}

TEST(ConstantFiFringe, InformationIsConstant) {
  const ConstantFiFringe model(2.5);
  for (double t : {0.0, 0.4, 1.9871, 3.0}) EXPECT_NEAR(model.fi(t), 2.5, 1e-10);
  EXPECT_THROW(ConstantFiFringe(0.0), InvalidArgument);
}

TEST(CategoricalFi, Examples) {
  EXPECT_EQ(categorical_fi({{0.5, 0.5}, {0.0, 0.0}}), 0.0);
  const QubitFringe fringe(QubitPreparation::deterministic(0.0));
  for (double t : {0.3, 1.2, 2.0}) {
    EXPECT_NEAR(categorical_fi(to_categorical(fringe, t)), 1.0, 1e-12);
  }
}

TEST(CategoricalFi, FivePointModelMatchesFiniteDifferences) {
  // p_x(theta) = softmax(c_x + k_x theta), differentiated numerically.
  const double c[] = {0.1, -0.4, 0.9, 0.0, -1.2};
  const double k[] = {0.7, -0.3, 0.2, -1.1, 0.5};
  auto probs = [&](double theta) {
    std::vector<double> p(5);
    double total = 0.0;
    for (int i = 0; i < 5; ++i) total += p[i] = std::exp(c[i] + k[i] * theta);
    for (double& v : p) v /= total;
    return p;
  };
  const double theta = 0.37;
  const double h = 1e-6;
  const auto p = probs(theta);
  const auto up = probs(theta + h);
  const auto down = probs(theta - h);
  CategoricalModel model{p, std::vector<double>(5)};
  double fd_fi = 0.0;
  for (int i = 0; i < 5; ++i) {
    model.p_dot[i] = (up[i] - down[i]) / (2.0 * h);
    const double dlog = (std::log(up[i]) - std::log(down[i])) / (2.0 * h);
    fd_fi += p[i] * dlog * dlog;
  }
  EXPECT_NEAR(categorical_fi(model), fd_fi, 1e-6);
}

TEST(CategoricalFi, IrregularAndInvalidModels) {
  EXPECT_THROW(categorical_fi({{1.0, 0.0}, {-0.1, 0.1}}), IrregularModel);
  EXPECT_EQ(categorical_fi({{1.0, 0.0}, {0.0, 0.0}}), 0.0);
  EXPECT_THROW(categorical_fi({{0.6, 0.6}, {0.0, 0.0}}), InvalidArgument);
  EXPECT_THROW(categorical_fi({{0.5, 0.5}, {0.1, 0.1}}), InvalidArgument);
  EXPECT_THROW(categorical_fi({{0.5, 0.5}, {0.0}}), DimensionMismatch);
}

TEST(CategoricalFi, AdditivityAcrossIndependentContexts) {
  const QubitFringe a(kGeneric);
  const NoisyFringe b(kNoisy);
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> uni(0.05, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double t1 = uni(gen);
    const double t2 = uni(gen);
    const CategoricalModel m1 = to_categorical(a, t1);
    const CategoricalModel m2 = to_categorical(b, t2);
    EXPECT_NEAR(categorical_fi(independent_product(m1, m2)),
                categorical_fi(m1) + categorical_fi(m2), 1e-10);
  }
}
