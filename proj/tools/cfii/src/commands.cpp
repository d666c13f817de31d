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

#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>

#include <CLI11.hpp>

#include "cfii/adversary.hpp"
#include "cfii/error.hpp"
#include "cfii/estimate.hpp"
#include "cfii/parallel.hpp"
#include "cfii/witness.hpp"

namespace cfii::cli {
namespace {

std::unique_ptr<BinaryModel> make_model(const ExperimentConfig& c) {
  if (c.model == "noisy") {
    return std::make_unique<NoisyFringe>(NoisyFringeParams::make(c.vartheta0, c.gamma, c.eps_r));
  }
  return std::make_unique<QubitFringe>(QubitPreparation::make(c.vartheta, c.varphi));
}

NoisyFringeParams noisy_params(const ExperimentConfig& c, double gamma) {
  return NoisyFringeParams::make(c.vartheta0, gamma, c.eps_r);
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

ResultTable cmd_fi(const ExperimentConfig& c) {
  const auto model = make_model(c);
  ResultTable t({"theta", "p0", "fi"});
  for (double theta : c.grid->points()) t.add_row({theta, model->p0(theta), model->fi(theta)});
  return t;
}

ResultTable cmd_landscape(const ExperimentConfig& c) {
  const QubitFringe model(QubitPreparation::make(c.vartheta, c.varphi));
  const std::vector<double> axis = c.grid->points();
  const std::size_t n = axis.size();

  struct CellResult {
    double f_ac, f_cb, f_ab, v, g;
    bool degenerate;
  };
  std::vector<CellResult> cells(n * n);
  parallel_for(cells.size(), [&](std::size_t idx) {
    const double ac = axis[idx / n], cb = axis[idx % n];
    CellResult r{model.fi(ac), model.fi(cb), model.fi(ac + cb), NAN, NAN, false};
    if (r.f_ac > 0.0 && r.f_cb > 0.0 && r.f_ab > 0.0 && std::isfinite(r.f_ab)) {
      r.v = v_path(r.f_ab, r.f_ac, r.f_cb);
      r.g = gain_indicator(r.f_ab, classical_benchmark_path(r.f_ac, r.f_cb));
    } else {
      r.degenerate = true;
    }
    cells[idx] = r;
  });

  ResultTable t({"i", "j", "theta_ac", "theta_cb", "f_ac", "f_cb", "f_ab", "v", "g",
                 "v_clipped", "degenerate"});
  std::int64_t degenerate = 0;
  bool agree = true;
  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    const CellResult& r = cells[idx];
    if (r.degenerate) {
      ++degenerate;
    } else if (sign(r.v) != sign(r.g)) {
      agree = false;
    }
    t.add_row({static_cast<std::int64_t>(idx / n), static_cast<std::int64_t>(idx % n),
               axis[idx / n], axis[idx % n], r.f_ac, r.f_cb, r.f_ab, r.v, r.g,
               r.degenerate ? NAN : std::clamp(r.v, -c.clip, c.clip), r.degenerate});
  }
  t.meta()["clip_lo"] = -c.clip;
  t.meta()["clip_hi"] = c.clip;
  t.meta()["g_boundary"] = 0.0;
  t.meta()["degenerate_cells"] = degenerate;
  t.meta()["sign_agreement"] = agree;
  return t;
}

ResultTable cmd_certify(const ExperimentConfig& c) {
  const SeMode mode = c.se_mode == "empirical" ? SeMode::kEmpirical : SeMode::kAnalyticMoment;
  const std::vector<double> gammas = c.gamma_grid ? c.gamma_grid->points()
                                                  : std::vector<double>{c.gamma};
  const std::vector<std::int64_t> shot_counts =
      c.shots_list ? *c.shots_list : std::vector<std::int64_t>{c.shots};
  const std::size_t reps = static_cast<std::size_t>(*c.reps);
  const std::size_t cells = gammas.size() * shot_counts.size();
  const int k = c.k;
  if (k < 2) throw ConfigError("certification needs k >= 2");

  std::vector<CertificationReport> expected(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const NoisyFringe model(noisy_params(c, gammas[cell / shot_counts.size()]));
    expected[cell] = expected_certification(
        model, c.t_total, k, static_cast<std::size_t>(shot_counts[cell % shot_counts.size()]));
  }

  const CounterRng root(*c.seed);
  std::vector<CertificationReport> sampled(cells * reps);
  parallel_for(sampled.size(), [&](std::size_t idx) {
    const std::size_t cell = idx / reps;
    const NoisyFringe model(noisy_params(c, gammas[cell / shot_counts.size()]));
    const auto shots = static_cast<std::size_t>(shot_counts[cell % shot_counts.size()]);
    const CounterRng stream = root.split(idx);
    CounterRng end_rng = stream.split(0);
    const ContextSample endpoint = sample_binary(model, c.t_total, shots, end_rng);
    std::vector<ContextSample> segments;
    segments.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      CounterRng seg_rng = stream.split(static_cast<std::uint64_t>(j) + 1);
      segments.push_back(sample_binary(model, c.t_total / k, shots, seg_rng));
    }
    sampled[idx] = certify_vk(endpoint, segments, model, mode);
  });

  ResultTable t({"gamma", "shots", "rep", "v_hat", "se", "z", "ci_lo", "ci_hi", "v_expected",
                 "se_expected", "z_expected", "z_expected_ge_3", "z_expected_ge_5"});
  for (std::size_t idx = 0; idx < sampled.size(); ++idx) {
    const std::size_t cell = idx / reps;
    const CertificationReport& s = sampled[idx];
    const CertificationReport& e = expected[cell];
    t.add_row({gammas[cell / shot_counts.size()], shot_counts[cell % shot_counts.size()],
               static_cast<std::int64_t>(idx % reps), s.v_hat, s.se, s.z, s.ci95.lo, s.ci95.hi,
               e.v_hat, e.se, e.z, e.z >= 3.0, e.z >= 5.0});
  }
  t.meta()["se_mode"] = to_string(mode);
  return t;
}

ResultTable cmd_adversary(const ExperimentConfig& c) {
  AdamOptions opts;
  opts.lr = c.lr;
  opts.steps = c.steps;
  const RestartResult r = optimize_restarts(c.l, c.m, c.restarts, opts, *c.seed);
  ResultTable t({"restart", "initial_gamma", "best_gamma"});
  double sum = 0.0, lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < r.per_restart.size(); ++i) {
    t.add_row({static_cast<std::int64_t>(i), r.initial[i], r.per_restart[i]});
    sum += r.per_restart[i];
    lo = std::min(lo, r.per_restart[i]);
    hi = std::max(hi, r.per_restart[i]);
  }
  t.meta()["gamma_max"] = hi;
  t.meta()["gamma_mean"] = sum / static_cast<double>(r.per_restart.size());
  t.meta()["gamma_min"] = lo;
  t.meta()["max_evaluated"] = r.max_evaluated;
  return t;
}

ResultTable cmd_rmse(const ExperimentConfig& c) {
  const QubitFringe model(QubitPreparation::deterministic(c.vartheta));
  const double f = model.fi(c.theta);
  const double f_cl = split_optimized_benchmark(model, c.theta).fi;
  const CounterRng root(*c.seed);
  ResultTable t({"n", "rmse", "rmse_sqrt_n", "crb", "classical_bound", "edge_hits"});
  for (std::size_t i = 0; i < c.n_list->size(); ++i) {
    const std::int64_t n = (*c.n_list)[i];
    const RmseResult r = mc_rmse(model, c.theta, c.vartheta, static_cast<std::size_t>(n),
                                 static_cast<std::size_t>(*c.reps), root.split(i)());
    const double nd = static_cast<double>(n);
    t.add_row({n, r.rmse, r.rmse * std::sqrt(nd), 1.0 / std::sqrt(nd * f),
               1.0 / std::sqrt(nd * f_cl), static_cast<std::int64_t>(r.edge_hits)});
  }
  t.meta()["fi"] = f;
  t.meta()["classical_fi"] = f_cl;
  return t;
}

ResultTable cmd_chain(const ExperimentConfig& c) {
  ResultTable t({"gamma", "k", "f_end", "f_segment", "v_k", "gamma_k", "gamma_k_mid_fringe"});
  for (int k : *c.k_list) {
    if (k < 2) throw ConfigError("chain lengths must be >= 2");
  }
  for (double gamma : c.gamma_grid->points()) {
    const NoisyFringe model(noisy_params(c, gamma));
    for (int k : *c.k_list) {
      const WitnessReport r = k_chain_gain(model, c.t_total, k);
      const double approx = k * std::exp(-2.0 * gamma * c.t_total * (1.0 - 1.0 / k));
      t.add_row({gamma, static_cast<std::int64_t>(k), r.f_end, r.f_segments.front(), r.v,
                 r.gamma_ratio, approx});
    }
  }
  return t;
}

ResultTable cmd_nsit_demo(const ExperimentConfig&) {
  const NsitDemo d = nsit_separation_demo();
  ResultTable t({"nsit_holds", "v_path", "max_marginal_deviation", "max_fi_deviation"});
  t.add_row({d.nsit_holds, d.v_path_value, d.max_marginal_deviation, d.max_fi_deviation});
  return t;
}

ResultTable cmd_crossing(const ExperimentConfig& c) {
  const std::vector<int> ks = c.k_list ? *c.k_list : std::vector<int>{c.k};
  ResultTable t({"k", "gamma_star"});
  for (int k : ks) {
    if (k < 2) throw ConfigError("chain lengths must be >= 2");
    t.add_row({static_cast<std::int64_t>(k), gamma_crossing(noisy_params(c, 0.0), c.t_total, k)});
  }
  return t;
}

ResultTable run_command(const ExperimentConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  ResultTable t = [&] {
    if (c.command == "fi") return cmd_fi(c);
    if (c.command == "landscape") return cmd_landscape(c);
    if (c.command == "certify") return cmd_certify(c);
    if (c.command == "adversary") return cmd_adversary(c);
    if (c.command == "rmse") return cmd_rmse(c);
    if (c.command == "chain") return cmd_chain(c);
    if (c.command == "nsit-demo") return cmd_nsit_demo(c);
    if (c.command == "crossing") return cmd_crossing(c);
    throw ConfigError("unknown command '" + c.command + "'");
  }();
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::ordered_json meta;
  meta["tool_version"] = kToolVersion;
  meta["command"] = c.command;
  meta["seed"] = c.seed ? nlohmann::ordered_json(*c.seed) : nlohmann::ordered_json(nullptr);
  meta["config"] = c.to_json();
  for (const auto& [key, value] : t.meta().items()) meta[key] = value;
  meta["wall_clock_s"] = elapsed;
  t.meta() = std::move(meta);
  return t;
}

namespace {

struct Flag {
  const char* name;  // command-line spelling
  const char* key;   // config key
  const char* help;
  bool list = false;
};

const Flag kFlags[] = {
    {"--model", "model", "qubit or noisy"},
    {"--vartheta", "vartheta", "qubit preparation polar angle"},
    {"--varphi", "varphi", "qubit preparation azimuth"},
    {"--vartheta0", "vartheta0", "noisy fringe phase offset"},
    {"--gamma", "gamma", "dephasing rate"},
    {"--eps-r", "eps_r", "readout error"},
    {"--k", "k", "chain length"},
    {"--t-total", "t_total", "total parameter T"},
    {"--theta", "theta", "true parameter for rmse"},
    {"--shots", "shots", "shots per context"},
    {"--reps", "reps", "Monte-Carlo replications"},
    {"--se-mode", "se_mode", "analytic or empirical"},
    {"--clip", "clip", "landscape clipping bound for V"},
    {"--restarts", "restarts", "adversary restarts"},
    {"--l", "l", "adversary mediator values"},
    {"--m", "m", "adversary outcomes"},
    {"--steps", "steps", "Adam steps per restart"},
    {"--lr", "lr", "Adam learning rate"},
    {"--grid", "grid", "grid A:B:N"},
    {"--gamma-grid", "gamma_grid", "dephasing grid A:B:N"},
    {"--k-list", "k_list", "comma-separated chain lengths", true},
    {"--n-list", "n_list", "comma-separated sample sizes", true},
    {"--shots-list", "shots_list", "comma-separated shot counts", true},
    {"--seed", "seed", "random seed"},
    {"--out", "out", "output path"},
    {"--format", "format", "csv or json"},
};

nlohmann::json flag_value(const Flag& f, const std::string& raw) {
  const std::string key = f.key;
  if (key == "grid" || key == "gamma_grid" || key == "out" || key == "model" ||
      key == "format" || key == "se_mode") {
    return raw;
  }
  const std::string text = f.list ? "[" + raw + "]" : raw;
  nlohmann::json v = nlohmann::json::parse(text, nullptr, false);
  if (v.is_discarded()) {
    if (f.list) throw ConfigError(std::string(f.name) + " expects a comma-separated list");
    return raw;  // angle expressions such as pi/2
  }
  return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal Fisher-information inequality experiments", "cfii"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> flag_values(std::size(kFlags));
  std::vector<CLI::Option*> flag_options(std::size(kFlags) * 8, nullptr);
  std::vector<CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"fi", "Fisher information over a parameter grid"},
      {"landscape", "witness and gain indicator over a split grid"},
      {"certify", "finite-shot certification of the chain witness"},
      {"adversary", "optimized modular classical adversary"},
      {"rmse", "Monte-Carlo RMSE of the fringe MLE"},
      {"chain", "chain gain over dephasing rates and lengths"},
      {"nsit-demo", "NSIT-compatible maximal violation example"},
      {"crossing", "dephasing rate where the chain gain reaches one"},
  };
  for (std::size_t s = 0; s < std::size(commands); ++s) {
    CLI::App* sub = app.add_subcommand(commands[s].first, commands[s].second);
    sub->add_option("--config", config_path, "JSON config file");
    for (std::size_t i = 0; i < std::size(kFlags); ++i) {
      flag_options[s * std::size(kFlags) + i] =
          sub->add_option(kFlags[i].name, flag_values[i], kFlags[i].help);
    }
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    const CLI::App* active = nullptr;
    for (const CLI::App* sub : subs) {
      if (sub->parsed()) active = sub;
    }
    if (e.get_exit_code() == 0) {
      out << (active ? active->help() : app.help());
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::size_t active = 0;
  for (std::size_t s = 0; s < subs.size(); ++s) {
    if (subs[s]->parsed()) active = s;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
    nlohmann::json flags = nlohmann::json::object();
    for (std::size_t i = 0; i < std::size(kFlags); ++i) {
      if (flag_options[active * std::size(kFlags) + i]->count() > 0) {
        flags[kFlags[i].key] = flag_value(kFlags[i], flag_values[i]);
      }
    }
    cfg = config_from_json(flags, cfg);
    cfg.command = commands[active].first;
    cfg.finalize();

    const ResultTable table = run_command(cfg);
    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw ConfigError("cannot open output file '" + cfg.out + "'");
    }
    std::ostream& sink = cfg.out.empty() ? out : file;
    if (cfg.format == "json") {
      table.write_json(sink);
    } else {
      table.write_csv(sink);
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateError& e) {
    err << "numerical degeneracy: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace cfii::cli
