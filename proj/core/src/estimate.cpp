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

#include "cfii/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cfii/error.hpp"
#include "cfii/parallel.hpp"

namespace cfii {
namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Mean and unbiased variance of a two-valued sample: n0 copies of a, n1 of b.
FiEstimate two_point_estimate(std::size_t n0, double a, std::size_t n1, double b) {
  FiEstimate est;
  est.n = n0 + n1;
  const double n = static_cast<double>(est.n);
  est.value = (static_cast<double>(n0) * a + static_cast<double>(n1) * b) / n;
  if (est.n == 1) {
    est.degenerate = true;
    return est;
  }
  const double diff = a - b;
  const double sample_var =
      static_cast<double>(n0) * static_cast<double>(n1) * diff * diff / (n * (n - 1.0));
  est.variance = sample_var / n;
  return est;
}

double squared_score_or_zero(const BinaryModel& model, int x, double theta, std::size_t count) {
  if (count == 0) return 0.0;
  const double s = model.score(x, theta);
  return s * s;
}

}  // namespace

std::size_t ContextSample::count(int x) const {
  const auto zeros =
      static_cast<std::size_t>(std::count(outcomes.begin(), outcomes.end(), std::uint8_t{0}));
  return x == 0 ? zeros : outcomes.size() - zeros;
}

ContextSample sample_binary(const BinaryModel& model, double theta, std::size_t n,
                            CounterRng& rng) {
  if (n < 1) throw InvalidArgument("sample size must be >= 1");
  const double p0 = model.p0(theta);
  ContextSample sample{theta, std::vector<std::uint8_t>(n)};
  for (auto& x : sample.outcomes) x = rng.uniform() < p0 ? 0 : 1;
  return sample;
}

ContextSample sample_binary(const BinaryModel& model, double theta, std::size_t n,
                            std::uint64_t seed) {
  CounterRng rng(seed);
  return sample_binary(model, theta, n, rng);
}

FiEstimate plugin_fi(const ContextSample& sample, const BinaryModel& model) {
  if (sample.n() < 1) throw InvalidArgument("empty context sample");
  const std::size_t n0 = sample.count(0);
  const std::size_t n1 = sample.n() - n0;
  return two_point_estimate(n0, squared_score_or_zero(model, 0, sample.theta, n0), n1,
                            squared_score_or_zero(model, 1, sample.theta, n1));
}

double analytic_mu4(const BinaryModel& model, double theta) {
  double mu4 = 0.0;
  for (int x = 0; x < 2; ++x) {
    const double s = model.score(x, theta);
    mu4 += model.probability(x, theta) * s * s * s * s;
  }
  return mu4;
}

double analytic_plugin_variance(const BinaryModel& model, double theta, std::size_t n) {
  if (n < 1) throw InvalidArgument("sample size must be >= 1");
  const double f = model.fi(theta);
  return std::max(0.0, analytic_mu4(model, theta) - f * f) / static_cast<double>(n);
}

const char* to_string(SeMode mode) {
  return mode == SeMode::kAnalyticMoment ? "analytic-moment" : "empirical";
}

namespace {

CertificationReport assemble_report(double v, double se, FiEstimate endpoint,
                                    std::vector<FiEstimate> segments, SeMode mode) {
  CertificationReport r;
  r.v_hat = v;
  r.se = se;
  if (se > 0.0) {
    r.z = -v / se;
  } else {
    r.z = v < 0.0 ? std::numeric_limits<double>::infinity()
                  : (v > 0.0 ? -std::numeric_limits<double>::infinity() : 0.0);
  }
  r.ci95 = Interval{v - kZ95 * se, v + kZ95 * se};
  r.endpoint = endpoint;
  r.segments = std::move(segments);
  r.mode = mode;
  return r;
}

}  // namespace

CertificationReport certify_vk(const ContextSample& endpoint,
                               std::span<const ContextSample> segments,
                               const BinaryModel& model, SeMode mode) {
  if (segments.empty()) throw InvalidArgument("certification needs at least one segment");

  auto estimate = [&](const ContextSample& s) {
    FiEstimate e = plugin_fi(s, model);
    if (!(e.value > 0.0)) {
      throw NonPositiveFisherInformation("plug-in Fisher information estimate is zero at theta = " +
                                         std::to_string(s.theta));
    }
    return e;
  };
  // Squared gradient of V with respect to one context's information times
  // that context's estimator variance.
  auto contribution = [&](const ContextSample& s, const FiEstimate& e) {
    if (mode == SeMode::kAnalyticMoment) {
      const double f = model.fi(s.theta);
      return analytic_plugin_variance(model, s.theta, s.n()) / (f * f * f * f);
    }
    return e.variance / (e.value * e.value * e.value * e.value);
  };

  const FiEstimate end = estimate(endpoint);
  double v = 1.0 / end.value;
  CompensatedSum var;
  var.add(contribution(endpoint, end));
  std::vector<FiEstimate> seg;
  seg.reserve(segments.size());
  for (const ContextSample& s : segments) {
    seg.push_back(estimate(s));
    v -= 1.0 / seg.back().value;
    var.add(contribution(s, seg.back()));
  }
  return assemble_report(v, std::sqrt(var.value()), end, std::move(seg), mode);
}

CertificationReport expected_certification(const BinaryModel& model, double theta_total,
                                           int k, std::size_t shots_per_context) {
  if (k < 1) throw InvalidArgument("number of segments must be >= 1");
  if (shots_per_context < 1) throw InvalidArgument("shots per context must be >= 1");
  const double segment = theta_total / k;
  auto context = [&](double theta) {
    FiEstimate e;
    e.value = model.fi(theta);
    e.variance = analytic_plugin_variance(model, theta, shots_per_context);
    e.n = shots_per_context;
    if (!(e.value > 0.0)) {
      throw NonPositiveFisherInformation("analytic Fisher information is zero at theta = " +
                                         std::to_string(theta));
    }
    return e;
  };
  const FiEstimate end = context(theta_total);
  const FiEstimate seg = context(segment);
  const double v = 1.0 / end.value - k / seg.value;
  const double var = end.variance / std::pow(end.value, 4) +
                     k * seg.variance / std::pow(seg.value, 4);
  return assemble_report(v, std::sqrt(var), end, std::vector<FiEstimate>(k, seg),
                         SeMode::kAnalyticMoment);
}

std::array<double, 2> classifier_score(BinaryCounts plus, BinaryCounts minus, double delta,
                                       double alpha) {
  if (!(delta > 0.0)) throw InvalidArgument("classifier step delta must be positive");
  if (!(alpha >= 0.0)) throw InvalidArgument("smoothing alpha must be >= 0");
  if (plus.total() < 1 || minus.total() < 1) {
    throw InvalidArgument("each training class needs at least one sample");
  }
  const double np = static_cast<double>(plus.total()) + 2.0 * alpha;
  const double nm = static_cast<double>(minus.total()) + 2.0 * alpha;
  auto score = [&](std::size_t cp, std::size_t cm) {
    const double fp = (static_cast<double>(cp) + alpha) / np;
    const double fm = (static_cast<double>(cm) + alpha) / nm;
    return std::log(fp / fm) / (2.0 * delta);
  };
  return {score(plus.n0, minus.n0), score(plus.n1, minus.n1)};
}

FiEstimate classifier_fi(const BinaryModel& model, double theta,
                         const ClassifierOptions& options, CounterRng& rng) {
  CounterRng plus_rng = rng.split(0);
  CounterRng minus_rng = rng.split(1);
  CounterRng eval_rng = rng.split(2);
  const ContextSample plus =
      sample_binary(model, theta + options.delta, options.n_train, plus_rng);
  const ContextSample minus =
      sample_binary(model, theta - options.delta, options.n_train, minus_rng);
  const auto scores = classifier_score({plus.count(0), plus.count(1)},
                                       {minus.count(0), minus.count(1)}, options.delta,
                                       options.alpha);
  const ContextSample eval = sample_binary(model, theta, options.n_eval, eval_rng);
  const std::size_t n0 = eval.count(0);
  return two_point_estimate(n0, scores[0] * scores[0], eval.n() - n0, scores[1] * scores[1]);
}

MleEstimate mle_theta(double p0_hat, double vartheta) {
  if (!std::isfinite(p0_hat) || !std::isfinite(vartheta)) {
    throw InvalidArgument("MLE inputs must be finite");
  }
  MleEstimate est;
  const double p = std::clamp(p0_hat, 0.0, 1.0);
  est.on_branch_edge = p <= 0.0 || p >= 1.0;
  est.theta = vartheta + 2.0 * std::acos(std::sqrt(p));
  return est;
}

RmseResult mc_rmse(const BinaryModel& model, double theta_true, double vartheta,
                   std::size_t n, std::size_t reps, std::uint64_t seed) {
  if (n < 1 || reps < 1) throw InvalidArgument("need n >= 1 and reps >= 1");
  if (theta_true < vartheta || theta_true > vartheta + kPi) {
    throw InvalidArgument("true parameter lies outside the monotone MLE branch");
  }
  const CounterRng root(seed);
  std::vector<double> sq_err(reps);
  std::vector<std::uint8_t> edge(reps);
  parallel_for(reps, [&](std::size_t r) {
    CounterRng rng = root.split(r);
    const ContextSample s = sample_binary(model, theta_true, n, rng);
    const MleEstimate est =
        mle_theta(static_cast<double>(s.count(0)) / static_cast<double>(n), vartheta);
    const double err = est.theta - theta_true;
    sq_err[r] = err * err;
    edge[r] = est.on_branch_edge ? 1 : 0;
  });
  CompensatedSum total;
  for (double e : sq_err) total.add(e);
  RmseResult out;
  out.rmse = std::sqrt(total.value() / static_cast<double>(reps));
  out.edge_hits = static_cast<std::size_t>(std::count(edge.begin(), edge.end(), 1));
  return out;
}

double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

VkDistribution mc_vk_distribution(const NoisyFringeParams& params, double theta_total, int k,
                                  std::size_t shots_per_context, std::size_t reps,
                                  std::uint64_t seed) {
  if (k < 1) throw InvalidArgument("number of segments must be >= 1");
  if (shots_per_context < 1 || reps < 1) {
    throw InvalidArgument("need shots_per_context >= 1 and reps >= 1");
  }
  const NoisyFringe model(params);
  const double segment = theta_total / k;
  const CounterRng root(seed);
  VkDistribution dist;
  dist.values.resize(reps);
  parallel_for(reps, [&](std::size_t r) {
    const CounterRng rep = root.split(r);
    CounterRng end_rng = rep.split(0);
    const ContextSample endpoint = sample_binary(model, theta_total, shots_per_context, end_rng);
    std::vector<ContextSample> segments;
    segments.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      CounterRng seg_rng = rep.split(static_cast<std::uint64_t>(j) + 1);
      segments.push_back(sample_binary(model, segment, shots_per_context, seg_rng));
    }
    dist.values[r] = certify_vk(endpoint, segments, model, SeMode::kEmpirical).v_hat;
  });

  CompensatedSum sum;
  for (double v : dist.values) sum.add(v);
  dist.mean = sum.value() / static_cast<double>(reps);
  if (reps > 1) {
    CompensatedSum ss;
    for (double v : dist.values) ss.add((v - dist.mean) * (v - dist.mean));
    dist.sd = std::sqrt(ss.value() / static_cast<double>(reps - 1));
  }
  dist.ci95 = Interval{empirical_quantile(dist.values, 0.025),
                       empirical_quantile(dist.values, 0.975)};
  return dist;
}

}  // namespace cfii
