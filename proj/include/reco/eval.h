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
//
// Scoring of solved listener policies against graded judgments or gold
// labels, and the hyperparameter sweep engine.

#ifndef RECO_EVAL_H_
#define RECO_EVAL_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reco/game.h"
#include "reco/matrix.h"
#include "reco/solvers.h"
#include "reco/tasks.h"

namespace reco {

enum class Metric { kCorrelation, kTop1 };
enum class SolverKind { kReco, kRsa, kIbr, kLiteral, kBr };

std::string solver_kind_name(SolverKind kind);
SolverKind solver_kind_from_name(const std::string& name);
std::string metric_name(Metric metric);

// Listener matrices keyed by game id.
using ListenerPolicies = std::map<std::string, Matrix>;

// Pearson's correlation coefficient. Requires equal lengths >= 2; throws
// UndefinedCorrelationError when either vector is constant.
double pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation between the model listener probabilities and the
// human scores, pooled across every judgment row (the all-tasks pooling).
double score_correlation(const ListenerPolicies& policies,
                         const JudgmentSet& judgments);

// Fraction of (game, utterance) instances whose listener argmax hits the
// gold meaning. Argmax ties split credit 1/|ties| when the gold meaning
// attains the maximum. `gold` must mark exactly one meaning per instance
// with score 1; all scores must be 0 or 1.
double score_top1(const ListenerPolicies& policies, const JudgmentSet& gold);

// Grid axes for a sweep. For reco the axes are lambda_speaker x
// lambda_listener; for rsa they are alpha x depth. Remaining solver
// parameters come from the base configs passed to run_sweep.
struct SweepGrid {
  std::vector<double> lambda_speaker;
  std::vector<double> lambda_listener;
  std::vector<double> alpha;
  std::vector<int> depth;
};

struct SweepCell {
  double axis1 = 0.0;
  double axis2 = 0.0;
  std::optional<double> metric;                  // empty when errored
  std::vector<std::optional<double>> per_task;   // aligned with task_ids
  std::string error;                             // empty when solved
};

struct ScoreReport {
  Metric metric = Metric::kCorrelation;
  SolverKind solver = SolverKind::kReco;
  std::string axis1_name;
  std::string axis2_name;
  std::vector<std::string> task_ids;
  std::vector<SweepCell> cells;            // canonical axis1-major order
  std::optional<std::size_t> best_cell;    // index into cells
};

// Solves every game at every grid cell with the given solver, scores the
// listener policies, and returns the per-cell table plus the best cell.
// Per-cell solve errors are recorded in the cell, not raised.
ScoreReport run_sweep(std::span<const Game> games, const JudgmentSet& data,
                      Metric metric, SolverKind solver, const SweepGrid& grid,
                      const RecoConfig& reco_base, const RsaConfig& rsa_base);

// Scores a single solver configuration on a set of games (the 1x1 case of
// run_sweep, used directly by eval commands).
double score_solver(std::span<const Game> games, const JudgmentSet& data,
                    Metric metric, SolverKind solver,
                    const RecoConfig& reco_config, const RsaConfig& rsa_config);

// One row per grid cell: axis values, metric, error, per-task metrics.
// Doubles are rendered round-trip exact so reruns are byte-identical.
std::string report_to_csv(const ScoreReport& report);

// The same table in the structured document format of the game files.
std::string report_to_json(const ScoreReport& report);

}  // namespace reco

#endif  // RECO_EVAL_H_
