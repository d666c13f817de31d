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

#include "cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>

namespace cfii::cli {
namespace {

double parse_number(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + text + "' in '" + context + "'");
  }
  if (used != text.size()) {
    throw ConfigError("trailing characters in '" + context + "'");
  }
  return value;
}

std::string strip(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  return s;
}

std::string format_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::set<std::string>& known_commands() {
  static const std::set<std::string> names = {"fi",    "landscape", "certify",   "adversary",
                                              "rmse",  "chain",     "nsit-demo", "crossing"};
  return names;
}

double angle_field(const nlohmann::json& v, const char* key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_angle(v.get<std::string>());
  throw ConfigError(std::string("field '") + key + "' must be a number or angle string");
}

template <class T>
T typed_field(const nlohmann::json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

double parse_angle(const std::string& raw) {
  const std::string text = strip(raw);
  if (text.empty()) throw ConfigError("empty angle");
  const auto pos = text.find("pi");
  if (pos == std::string::npos) return parse_number(text, raw);

  std::string head = text.substr(0, pos);
  std::string tail = text.substr(pos + 2);
  if (!head.empty() && head.back() == '*') head.pop_back();
  double factor = 1.0;
  if (head == "-") {
    factor = -1.0;
  } else if (head == "+") {
    factor = 1.0;
  } else if (!head.empty()) {
    factor = parse_number(head, raw);
  }
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw ConfigError("cannot parse angle '" + raw + "'");
    divisor = parse_number(tail.substr(1), raw);
    if (divisor == 0.0) throw ConfigError("division by zero in '" + raw + "'");
  }
  return factor * std::numbers::pi / divisor;
}

GridSpec GridSpec::parse(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? first : text.find(':', first + 1);
  if (second == std::string::npos) {
    throw ConfigError("grid must be written A:B:N, got '" + text + "'");
  }
  GridSpec g;
  g.lo = parse_angle(text.substr(0, first));
  g.hi = parse_angle(text.substr(first + 1, second - first - 1));
  const double n = parse_number(strip(text.substr(second + 1)), text);
  if (n != std::floor(n) || n < 2 || n > 1e7) {
    throw ConfigError("grid point count must be an integer >= 2, got '" + text + "'");
  }
  g.n = static_cast<int>(n);
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || !(g.lo < g.hi)) {
    throw ConfigError("grid needs finite A < B, got '" + text + "'");
  }
  return g;
}

std::vector<double> GridSpec::points() const {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

std::string GridSpec::str() const {
  return format_g(lo) + ":" + format_g(hi) + ":" + std::to_string(n);
}

bool is_stochastic(const std::string& command) {
  return command == "certify" || command == "adversary" || command == "rmse";
}

void ExperimentConfig::finalize() {
  if (!known_commands().count(command)) throw ConfigError("unknown command '" + command + "'");
  if (model != "qubit" && model != "noisy") {
    throw ConfigError("model must be 'qubit' or 'noisy'");
  }
  if (format != "csv" && format != "json") throw ConfigError("format must be 'csv' or 'json'");
  if (se_mode != "analytic" && se_mode != "empirical") {
    throw ConfigError("se_mode must be 'analytic' or 'empirical'");
  }
  if (is_stochastic(command) && !seed) {
    throw ConfigError("command '" + command + "' is stochastic and needs --seed");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be >= 0");
  if (!(eps_r >= 0.0 && eps_r < 0.5)) throw ConfigError("eps_r must lie in [0, 0.5)");
  if (!(t_total > 0.0) || !std::isfinite(t_total)) throw ConfigError("t_total must be > 0");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (shots < 1) throw ConfigError("shots must be >= 1");
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
  if (l < 1 || m < 2) throw ConfigError("adversary needs l >= 1 and m >= 2");
  if (steps < 0) throw ConfigError("steps must be >= 0");
  if (!(lr > 0.0)) throw ConfigError("lr must be > 0");
  if (!(clip > 0.0)) throw ConfigError("clip must be > 0");

  if (!reps) reps = command == "rmse" ? 1000 : 1;
  if (*reps < 1) throw ConfigError("reps must be >= 1");

  if (!grid) {
    if (command == "fi") grid = GridSpec{0.0, 2.0 * std::numbers::pi, 101};
    if (command == "landscape") grid = GridSpec{0.05, std::numbers::pi, 64};
  }
  if (command == "chain") {
    if (!gamma_grid) gamma_grid = GridSpec{0.0, 1.0, 11};
    if (!k_list) k_list = std::vector<int>{2, 3, 4, 5, 6, 7, 8};
  }
  if (command == "rmse" && !n_list) n_list = std::vector<std::int64_t>{10, 100, 1000, 10000};
  if (k_list) {
    if (k_list->empty()) throw ConfigError("k_list must not be empty");
    for (int v : *k_list) {
      if (v < 1) throw ConfigError("k_list entries must be >= 1");
    }
  }
  for (const auto* list : {&n_list, &shots_list}) {
    if (!*list) continue;
    if ((*list)->empty()) throw ConfigError("count lists must not be empty");
    for (auto v : **list) {
      if (v < 1) throw ConfigError("count list entries must be >= 1");
    }
  }
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["model"] = model;
  j["vartheta"] = vartheta;
  j["varphi"] = varphi;
  j["vartheta0"] = vartheta0;
  j["gamma"] = gamma;
  j["eps_r"] = eps_r;
  j["k"] = k;
  j["t_total"] = t_total;
  j["theta"] = theta;
  j["shots"] = shots;
  if (reps) j["reps"] = *reps;
  j["se_mode"] = se_mode;
  j["clip"] = clip;
  j["restarts"] = restarts;
  j["l"] = l;
  j["m"] = m;
  j["steps"] = steps;
  j["lr"] = lr;
  if (grid) j["grid"] = grid->str();
  if (gamma_grid) j["gamma_grid"] = gamma_grid->str();
  if (k_list) j["k_list"] = *k_list;
  if (n_list) j["n_list"] = *n_list;
  if (shots_list) j["shots_list"] = *shots_list;
  if (seed) j["seed"] = *seed;
  if (!out.empty()) j["out"] = out;
  j["format"] = format;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig cfg) {
  const nlohmann::json* src = &doc;
  if (doc.is_object() && doc.contains("meta") && doc["meta"].is_object() &&
      doc["meta"].contains("config")) {
    src = &doc["meta"]["config"];
  }
  if (!src->is_object()) throw ConfigError("config must be a JSON object");

  for (const auto& [key, v] : src->items()) {
    const char* k = key.c_str();
    if (key == "command") cfg.command = typed_field<std::string>(v, k);
    else if (key == "model") cfg.model = typed_field<std::string>(v, k);
    else if (key == "vartheta") cfg.vartheta = angle_field(v, k);
    else if (key == "varphi") cfg.varphi = angle_field(v, k);
    else if (key == "vartheta0") cfg.vartheta0 = angle_field(v, k);
    else if (key == "gamma") cfg.gamma = typed_field<double>(v, k);
    else if (key == "eps_r") cfg.eps_r = typed_field<double>(v, k);
    else if (key == "k") cfg.k = typed_field<int>(v, k);
    else if (key == "t_total") cfg.t_total = angle_field(v, k);
    else if (key == "theta") cfg.theta = angle_field(v, k);
    else if (key == "shots") cfg.shots = typed_field<std::int64_t>(v, k);
    else if (key == "reps") cfg.reps = typed_field<std::int64_t>(v, k);
    else if (key == "se_mode") cfg.se_mode = typed_field<std::string>(v, k);
    else if (key == "clip") cfg.clip = typed_field<double>(v, k);
    else if (key == "restarts") cfg.restarts = typed_field<int>(v, k);
    else if (key == "l") cfg.l = typed_field<int>(v, k);
    else if (key == "m") cfg.m = typed_field<int>(v, k);
    else if (key == "steps") cfg.steps = typed_field<int>(v, k);
    else if (key == "lr") cfg.lr = typed_field<double>(v, k);
    else if (key == "grid") cfg.grid = GridSpec::parse(typed_field<std::string>(v, k));
    else if (key == "gamma_grid") cfg.gamma_grid = GridSpec::parse(typed_field<std::string>(v, k));
    else if (key == "k_list") cfg.k_list = typed_field<std::vector<int>>(v, k);
    else if (key == "n_list") cfg.n_list = typed_field<std::vector<std::int64_t>>(v, k);
    else if (key == "shots_list") cfg.shots_list = typed_field<std::vector<std::int64_t>>(v, k);
    else if (key == "seed") cfg.seed = typed_field<std::uint64_t>(v, k);
    else if (key == "out") cfg.out = typed_field<std::string>(v, k);
    else if (key == "format") cfg.format = typed_field<std::string>(v, k);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(doc, std::move(base));
}

}  // namespace cfii::cli
