// Copyright 2026 The ReCo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reco/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "reco/error.h"

namespace reco {
namespace {

// Round-trip exact rendering so reports are byte-identical across reruns.
std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

// Listener matrix per game at one solver configuration.
ListenerPolicies solve_listeners(std::span<const Game> games,
                                 SolverKind solver,
                                 const RecoConfig& reco_config,
                                 const RsaConfig& rsa_config) {
  ListenerPolicies policies;
  for (const Game& game : games) {
    Matrix listener;
    switch (solver) {
      case SolverKind::kReco:
        listener = reco_solve(game, reco_config).averages.listener;
        break;
      case SolverKind::kRsa:
        listener = rsa_solve(game, rsa_config).listener;
        break;
      case SolverKind::kIbr:
        listener = ibr_solve(game, rsa_config.depth, rsa_config.start).listener;
        break;
      case SolverKind::kLiteral:
        listener = literal_listener(game);
        break;
      case SolverKind::kBr:
        listener = br_listener_to_literal_speaker(game);
        break;
    }
    policies.emplace(game.id(), std::move(listener));
  }
  return policies;
}

double score_metric(const ListenerPolicies& policies, const JudgmentSet& data,
                    Metric metric) {
  return metric == Metric::kCorrelation ? score_correlation(policies, data)
                                        : score_top1(policies, data);
}

}  // namespace

std::string solver_kind_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::kReco: return "reco";
    case SolverKind::kRsa: return "rsa";
    case SolverKind::kIbr: return "ibr";
    case SolverKind::kLiteral: return "literal";
    case SolverKind::kBr: return "br";
  }
  return "unknown";
}

SolverKind solver_kind_from_name(const std::string& name) {
  if (name == "reco") return SolverKind::kReco;
  if (name == "rsa") return SolverKind::kRsa;
  if (name == "ibr") return SolverKind::kIbr;
  if (name == "literal") return SolverKind::kLiteral;
  if (name == "br") return SolverKind::kBr;
  throw PreconditionError("unknown solver '" + name +
                          "' (expected reco, rsa, ibr, literal, or br)");
}

std::string metric_name(Metric metric) {
  return metric == Metric::kCorrelation ? "correlation" : "top1";
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ShapeError("pearson: length mismatch");
  }
  if (x.size() < 2) {
    throw PreconditionError("pearson: need at least two points");
  }
  const double n = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelationError(
        "pearson: correlation undefined for a constant vector");
  }
  return sxy / std::sqrt(sxx * syy);
}

double score_correlation(const ListenerPolicies& policies,
                         const JudgmentSet& judgments) {
  std::vector<double> model, human;
  std::vector<std::string> missing;
  model.reserve(judgments.rows().size());
  human.reserve(judgments.rows().size());
  for (const auto& row : judgments.rows()) {
    auto it = policies.find(row.game_id);
    if (it == policies.end()) {
      missing.push_back("(" + row.game_id + ", " + row.utterance_label + ", " +
                        row.meaning_label + ")");
      continue;
    }
    model.push_back(it->second(row.utterance, row.meaning));
    human.push_back(row.score);
  }
  if (!missing.empty()) {
    std::string keys;
    for (const auto& key : missing) {
      if (!keys.empty()) keys += ", ";
      keys += key;
    }
    throw CoverageError("score_correlation: no model policy for " + keys);
  }
  return pearson(model, human);
}

double score_top1(const ListenerPolicies& policies, const JudgmentSet& gold) {
  // Group rows into (game, utterance) instances and find the gold meaning.
  struct Instance {
    const Matrix* listener = nullptr;
    std::vector<std::size_t> gold_meanings;
  };
  std::map<std::pair<std::string, std::size_t>, Instance> instances;
  for (const auto& row : gold.rows()) {
    if (row.score != 0.0 && row.score != 1.0) {
      throw DataError("score_top1: gold labels must be binary, got " +
                      format_double(row.score) + " for (" + row.game_id +
                      ", " + row.utterance_label + ", " + row.meaning_label +
                      ")");
    }
    auto it = policies.find(row.game_id);
    if (it == policies.end()) {
      throw CoverageError("score_top1: no model policy for game '" +
                          row.game_id + "'");
    }
    Instance& instance = instances[{row.game_id, row.utterance}];
    instance.listener = &it->second;
    if (row.score == 1.0) instance.gold_meanings.push_back(row.meaning);
  }
  if (instances.empty()) {
    throw DataError("score_top1: no gold instances");
  }

  double credit = 0.0;
  for (const auto& [key, instance] : instances) {
    if (instance.gold_meanings.size() != 1) {
      throw DataError("score_top1: expected exactly one gold meaning for (" +
                      key.first + ", utterance " +
                      std::to_string(key.second) + "), got " +
                      std::to_string(instance.gold_meanings.size()));
    }
    const Matrix& listener = *instance.listener;
    const std::size_t u = key.second;
    double best = -1.0;
    for (std::size_t m = 0; m < listener.cols(); ++m) {
      best = std::max(best, listener(u, m));
    }
    std::size_t ties = 0;
    bool gold_attains = false;
    for (std::size_t m = 0; m < listener.cols(); ++m) {
      if (listener(u, m) == best) {
        ++ties;
        if (m == instance.gold_meanings.front()) gold_attains = true;
      }
    }
    if (gold_attains) credit += 1.0 / static_cast<double>(ties);
  }
  return credit / static_cast<double>(instances.size());
}

double score_solver(std::span<const Game> games, const JudgmentSet& data,
                    Metric metric, SolverKind solver,
                    const RecoConfig& reco_config,
                    const RsaConfig& rsa_config) {
  return score_metric(solve_listeners(games, solver, reco_config, rsa_config),
                      data, metric);
}

ScoreReport run_sweep(std::span<const Game> games, const JudgmentSet& data,
                      Metric metric, SolverKind solver, const SweepGrid& grid,
                      const RecoConfig& reco_base, const RsaConfig& rsa_base) {
  ScoreReport report;
  report.metric = metric;
  report.solver = solver;

  std::vector<std::pair<double, double>> cells_axes;
  if (solver == SolverKind::kReco) {
    if (grid.lambda_speaker.empty() || grid.lambda_listener.empty()) {
      throw PreconditionError("run_sweep: reco grid axes must be non-empty");
    }
    for (double v : grid.lambda_speaker) {
      if (!(v > 0.0)) throw PreconditionError("run_sweep: lambda values must be positive");
    }
    for (double v : grid.lambda_listener) {
      if (!(v > 0.0)) throw PreconditionError("run_sweep: lambda values must be positive");
    }
    report.axis1_name = "lambda_s";
    report.axis2_name = "lambda_l";
    for (double a : grid.lambda_speaker) {
      for (double b : grid.lambda_listener) cells_axes.emplace_back(a, b);
    }
  } else if (solver == SolverKind::kRsa) {
    if (grid.alpha.empty() || grid.depth.empty()) {
      throw PreconditionError("run_sweep: rsa grid axes must be non-empty");
    }
    for (double v : grid.alpha) {
      if (!(v > 0.0)) throw PreconditionError("run_sweep: alpha values must be positive");
    }
    for (int d : grid.depth) {
      if (d < 0) throw PreconditionError("run_sweep: depths must be >= 0");
    }
    report.axis1_name = "alpha";
    report.axis2_name = "depth";
    for (double a : grid.alpha) {
      for (int d : grid.depth) cells_axes.emplace_back(a, d);
    }
  } else {
    throw PreconditionError("run_sweep: grids are defined for reco and rsa");
  }

  for (const Game& game : games) report.task_ids.push_back(game.id());

  for (const auto& [axis1, axis2] : cells_axes) {
    SweepCell cell;
    cell.axis1 = axis1;
    cell.axis2 = axis2;
    cell.per_task.resize(report.task_ids.size());
    try {
      RecoConfig reco_config = reco_base;
      RsaConfig rsa_config = rsa_base;
      if (solver == SolverKind::kReco) {
        reco_config.lambda_speaker = axis1;
        reco_config.lambda_listener = axis2;
      } else {
        rsa_config.alpha = axis1;
        rsa_config.depth = static_cast<int>(axis2);
      }
      ListenerPolicies policies =
          solve_listeners(games, solver, reco_config, rsa_config);
      cell.metric = score_metric(policies, data, metric);
      // Per-task breakdown; a task whose metric is undefined (for example a
      // constant model vector within one game) stays blank.
      for (std::size_t g = 0; g < games.size(); ++g) {
        std::vector<Judgment> single;
        for (const auto& row : data.rows()) {
          if (row.game_id != games[g].id()) continue;
          single.push_back(Judgment{row.game_id, row.utterance_label,
                                    row.meaning_label, row.score});
        }
        if (single.empty()) continue;
        JudgmentSet subset = JudgmentSet::FromJudgments(
            std::span<const Game>(&games[g], 1), single);
        try {
          cell.per_task[g] = score_metric(policies, subset, metric);
        } catch (const NumericError&) {
          // leave blank
        }
      }
    } catch (const Error& e) {
      cell.metric.reset();
      cell.error = e.what();
    }
    report.cells.push_back(std::move(cell));
  }

  // Best cell: highest metric, earliest cell on ties.
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    if (!report.cells[i].metric.has_value()) continue;
    if (!report.best_cell.has_value() ||
        *report.cells[i].metric >
            *report.cells[*report.best_cell].metric) {
      report.best_cell = i;
    }
  }
  return report;
}

std::string report_to_csv(const ScoreReport& report) {
  std::ostringstream out;
  out << report.axis1_name << "," << report.axis2_name << ","
      << metric_name(report.metric) << ",error";
  for (const auto& id : report.task_ids) out << ",task:" << id;
  out << "\n";
  for (const auto& cell : report.cells) {
    out << format_double(cell.axis1) << "," << format_double(cell.axis2)
        << ",";
    if (cell.metric.has_value()) out << format_double(*cell.metric);
    out << ",";
    // Errors are quoted so commas in messages stay in one field.
    if (!cell.error.empty()) {
      std::string quoted = cell.error;
      std::string::size_type pos = 0;
      while ((pos = quoted.find('"', pos)) != std::string::npos) {
        quoted.replace(pos, 1, "\"\"");
        pos += 2;
      }
      out << '"' << quoted << '"';
    }
    for (const auto& value : cell.per_task) {
      out << ",";
      if (value.has_value()) out << format_double(*value);
    }
    out << "\n";
  }
  return out.str();
}

std::string report_to_json(const ScoreReport& report) {
  nlohmann::json doc;
  doc["solver"] = solver_kind_name(report.solver);
  doc["metric"] = metric_name(report.metric);
  doc["axis1"] = report.axis1_name;
  doc["axis2"] = report.axis2_name;
  doc["tasks"] = report.task_ids;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : report.cells) {
    nlohmann::json c;
    c[report.axis1_name] = cell.axis1;
    c[report.axis2_name] = cell.axis2;
    if (cell.metric.has_value()) {
      c["metric"] = *cell.metric;
    } else {
      c["error"] = cell.error;
    }
    nlohmann::json per_task = nlohmann::json::object();
    for (std::size_t g = 0; g < report.task_ids.size(); ++g) {
      if (cell.per_task[g].has_value()) {
        per_task[report.task_ids[g]] = *cell.per_task[g];
      }
    }
    c["per_task"] = per_task;
    cells.push_back(std::move(c));
  }
  doc["cells"] = std::move(cells);
  if (report.best_cell.has_value()) {
    doc["best_cell"] = *report.best_cell;
  }
  return doc.dump(2) + "\n";
}

}  // namespace reco
