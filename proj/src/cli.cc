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

#include "reco/cli.h"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reco/error.h"
#include "reco/eval.h"
#include "reco/game.h"
#include "reco/matrix.h"
#include "reco/solvers.h"
#include "reco/tasks.h"

namespace reco::cli {
namespace {

using nlohmann::json;

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setfill('0') << std::setw(16) << hash;
  return "fnv1a64:" + out.str();
}

std::string read_file_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_or_throw(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ParseError("failed writing '" + path + "'");
}

// Options shared by all subcommands; every field has its default
// materialized so the manifest reflects the exact configuration used.
struct Options {
  std::vector<std::string> builtins;
  std::vector<std::string> game_paths;
  std::string judgments_path;
  std::string gold_path;
  std::string out_path;
  std::string solver = "reco";
  std::vector<std::string> solvers;  // eval only; empty means all
  std::string metric;                // empty: derived from the data kind
  std::string start = "listener";
  double lambda_s = 0.1;
  double lambda_l = 0.1;
  double eta_s = 1.0;
  double eta_l = 1.0;
  int iters = 1000;
  double alpha = 1.0;
  int depth = 1;
  // sweep grids
  std::vector<double> lambda_s_grid = {0.1, 1.0, 10.0};
  std::vector<double> lambda_l_grid = {0.1, 1.0, 10.0};
  std::vector<double> alpha_grid = {1.0, 2.0, 4.0, 8.0};
  std::vector<int> depth_grid = {0, 1, 2};
};

struct LoadedInput {
  std::string path;
  std::string digest;
};

Game make_builtin(const std::string& name) {
  if (name == "quantity") return build_quantity_game();
  if (name == "manner") return build_manner_game(0.75, 0.1, 0.4);
  throw PreconditionError("unknown builtin game '" + name + "'");
}

std::vector<Game> collect_games(const Options& options,
                                std::vector<LoadedInput>& inputs) {
  std::vector<Game> games;
  for (const auto& name : options.builtins) games.push_back(make_builtin(name));
  for (const auto& path : options.game_paths) {
    inputs.push_back({path, fnv1a64_hex(read_file_or_throw(path))});
    games.push_back(load_game(path));
  }
  if (games.empty()) {
    throw PreconditionError("no game given: use --builtin or --game");
  }
  std::set<std::string> ids;
  for (const auto& game : games) {
    if (!ids.insert(game.id()).second) {
      throw PreconditionError("duplicate game id '" + game.id() + "'");
    }
  }
  return games;
}

RecoConfig reco_config_of(const Options& options) {
  RecoConfig config;
  config.lambda_speaker = options.lambda_s;
  config.lambda_listener = options.lambda_l;
  config.eta_speaker = options.eta_s;
  config.eta_listener = options.eta_l;
  config.iterations = options.iters;
  return config;
}

RsaConfig rsa_config_of(const Options& options) {
  RsaConfig config;
  config.alpha = options.alpha;
  config.depth = options.depth;
  config.start =
      options.start == "speaker" ? Side::kSpeaker : Side::kListener;
  return config;
}

void print_matrix(std::ostream& out, const Matrix& m,
                  const std::vector<std::string>& row_labels,
                  const std::vector<std::string>& col_labels) {
  std::size_t row_width = 0;
  for (const auto& label : row_labels) row_width = std::max(row_width, label.size());
  std::vector<std::size_t> widths;
  for (const auto& label : col_labels) {
    widths.push_back(std::max<std::size_t>(label.size(), 6));
  }
  out << std::string(row_width, ' ');
  for (std::size_t c = 0; c < col_labels.size(); ++c) {
    out << "  " << std::setw(static_cast<int>(widths[c])) << col_labels[c];
  }
  out << "\n";
  out << std::fixed << std::setprecision(4);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << std::setw(static_cast<int>(row_width)) << std::left
        << row_labels[r] << std::right;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out << "  " << std::setw(static_cast<int>(widths[c])) << m(r, c);
    }
    out << "\n";
  }
  out.unsetf(std::ios::fixed);
  out << std::setprecision(6);
}

json manifest_json(const std::string& command, const json& config,
                   const std::vector<LoadedInput>& inputs) {
  json manifest;
  manifest["artifact_version"] = kArtifactVersion;
  manifest["command"] = command;
  manifest["config"] = config;
  json input_list = json::array();
  for (const auto& input : inputs) {
    input_list.push_back({{"path", input.path}, {"digest", input.digest}});
  }
  manifest["inputs"] = std::move(input_list);
  return manifest;
}

// Emits the manifest: to a sidecar file when the run wrote an output file,
// otherwise onto stdout after the results.
void emit_manifest(const json& manifest, const std::string& out_path,
                   std::ostream& out) {
  if (!out_path.empty()) {
    write_file_or_throw(out_path + ".manifest.json", manifest.dump(2) + "\n");
  } else {
    out << "run manifest:\n" << manifest.dump(2) << "\n";
  }
}

json config_json_common(const Options& options) {
  json config;
  config["solver"] = options.solver;
  config["lambda_s"] = options.lambda_s;
  config["lambda_l"] = options.lambda_l;
  config["eta_s"] = options.eta_s;
  config["eta_l"] = options.eta_l;
  config["iters"] = options.iters;
  config["alpha"] = options.alpha;
  config["depth"] = options.depth;
  config["start"] = options.start;
  config["builtin"] = options.builtins;
  config["game"] = options.game_paths;
  if (!options.out_path.empty()) config["out"] = options.out_path;
  return config;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  return rows;
}

int cmd_solve(const Options& options, std::ostream& out) {
  std::vector<LoadedInput> inputs;
  std::vector<Game> games = collect_games(options, inputs);
  if (games.size() != 1) {
    throw PreconditionError("solve expects exactly one game");
  }
  const Game& game = games.front();

  SolverKind kind = solver_kind_from_name(options.solver);
  std::optional<PolicyPair> pair;
  Matrix single_listener;
  switch (kind) {
    case SolverKind::kReco:
      pair = reco_solve(game, reco_config_of(options)).averages;
      break;
    case SolverKind::kRsa:
      pair = rsa_solve(game, rsa_config_of(options));
      break;
    case SolverKind::kIbr: {
      RsaConfig config = rsa_config_of(options);
      pair = ibr_solve(game, config.depth, config.start);
      break;
    }
    case SolverKind::kLiteral:
      single_listener = literal_listener(game);
      break;
    case SolverKind::kBr:
      single_listener = br_listener_to_literal_speaker(game);
      break;
  }

  std::ostringstream text;
  text << "game: " << game.id() << " (|M|=" << game.num_meanings()
       << ", |U|=" << game.num_utterances() << ")\n";
  text << "solver: " << options.solver << "\n\n";

  json result;
  result["game_id"] = game.id();
  result["solver"] = options.solver;
  result["meanings"] = game.meanings();
  result["utterances"] = game.utterances();

  if (pair.has_value()) {
    text << "speaker policy (rows: meanings, columns: utterances)\n";
    print_matrix(text, pair->speaker, game.meanings(), game.utterances());
    text << "\nlistener policy (rows: utterances, columns: meanings)\n";
    print_matrix(text, pair->listener, game.utterances(), game.meanings());
    text << std::fixed << std::setprecision(6);
    text << "\nexpected utility: speaker "
         << expected_utility(game, *pair, Side::kSpeaker) << ", listener "
         << expected_utility(game, *pair, Side::kListener) << "\n";
    text << "kl to anchor: speaker "
         << kl_to_anchor(game, *pair, Side::kSpeaker) << ", listener "
         << kl_to_anchor(game, *pair, Side::kListener) << "\n";
    result["speaker"] = matrix_to_json(pair->speaker);
    result["listener"] = matrix_to_json(pair->listener);
  } else {
    // Baselines produce a listener only; utilities pair it with the
    // default-semantics speaker.
    PolicyPair view(game.tau_speaker(), single_listener);
    text << "listener policy (rows: utterances, columns: meanings)\n";
    print_matrix(text, single_listener, game.utterances(), game.meanings());
    text << std::fixed << std::setprecision(6);
    text << "\nexpected utility (speaker fixed at default semantics): speaker "
         << expected_utility(game, view, Side::kSpeaker) << ", listener "
         << expected_utility(game, view, Side::kListener) << "\n";
    text << "kl to anchor: listener "
         << kl_to_anchor(game, view, Side::kListener) << "\n";
    result["listener"] = matrix_to_json(single_listener);
  }

  if (!options.out_path.empty()) {
    write_file_or_throw(options.out_path, result.dump(2) + "\n");
  }
  out << text.str();
  emit_manifest(manifest_json("solve", config_json_common(options), inputs),
                options.out_path, out);
  return kExitOk;
}

// Loads the judgment or gold file (exactly one must be given) and resolves
// the metric: an explicit --metric wins, otherwise judgments score
// correlation and gold scores top-1 accuracy.
JudgmentSet load_scoring_data(const Options& options,
                              std::span<const Game> games,
                              std::vector<LoadedInput>& inputs,
                              Metric& metric) {
  const bool has_judgments = !options.judgments_path.empty();
  const bool has_gold = !options.gold_path.empty();
  if (has_judgments == has_gold) {
    throw PreconditionError("exactly one of --judgments or --gold is needed");
  }
  const std::string& path =
      has_judgments ? options.judgments_path : options.gold_path;
  inputs.push_back({path, fnv1a64_hex(read_file_or_throw(path))});
  if (!options.metric.empty()) {
    metric = options.metric == "correlation" ? Metric::kCorrelation
                                             : Metric::kTop1;
  } else {
    metric = has_judgments ? Metric::kCorrelation : Metric::kTop1;
  }
  return load_judgments(path, games);
}

json scoring_config_json(const Options& options, Metric metric) {
  json config = config_json_common(options);
  if (!options.judgments_path.empty()) {
    config["judgments"] = options.judgments_path;
  }
  if (!options.gold_path.empty()) config["gold"] = options.gold_path;
  config["metric"] = metric_name(metric);
  return config;
}

int cmd_sweep(const Options& options, std::ostream& out) {
  std::vector<LoadedInput> inputs;
  std::vector<Game> games = collect_games(options, inputs);
  Metric metric = Metric::kCorrelation;
  JudgmentSet data = load_scoring_data(options, games, inputs, metric);

  SolverKind kind = solver_kind_from_name(options.solver);
  if (kind != SolverKind::kReco && kind != SolverKind::kRsa) {
    throw PreconditionError("sweep supports --solver reco or rsa");
  }

  SweepGrid grid;
  grid.lambda_speaker = options.lambda_s_grid;
  grid.lambda_listener = options.lambda_l_grid;
  grid.alpha = options.alpha_grid;
  grid.depth = options.depth_grid;

  ScoreReport report = run_sweep(games, data, metric, kind, grid,
                                 reco_config_of(options),
                                 rsa_config_of(options));
  std::string csv = report_to_csv(report);

  json config = scoring_config_json(options, metric);
  if (kind == SolverKind::kReco) {
    config["lambda_s_grid"] = options.lambda_s_grid;
    config["lambda_l_grid"] = options.lambda_l_grid;
  } else {
    config["alpha_grid"] = options.alpha_grid;
    config["depth_grid"] = options.depth_grid;
  }

  if (!options.out_path.empty()) {
    write_file_or_throw(options.out_path, csv);
  } else {
    out << csv;
  }
  if (report.best_cell.has_value()) {
    const SweepCell& best = report.cells[*report.best_cell];
    out << std::fixed << std::setprecision(6);
    out << "best: " << report.axis1_name << "=" << best.axis1 << " "
        << report.axis2_name << "=" << best.axis2 << " "
        << metric_name(metric) << "=" << *best.metric << "\n";
    out.unsetf(std::ios::fixed);
  } else {
    out << "best: none (every cell failed)\n";
  }
  emit_manifest(manifest_json("sweep", config, inputs), options.out_path, out);
  return kExitOk;
}

int cmd_eval(const Options& options, std::ostream& out) {
  std::vector<LoadedInput> inputs;
  std::vector<Game> games = collect_games(options, inputs);
  Metric metric = Metric::kCorrelation;
  JudgmentSet data = load_scoring_data(options, games, inputs, metric);

  std::vector<std::string> solver_names = options.solvers;
  if (solver_names.empty()) {
    solver_names = {"reco", "rsa", "ibr", "literal", "br"};
  }

  std::ostringstream text;
  text << std::fixed << std::setprecision(6);
  json results;
  for (const auto& name : solver_names) {
    SolverKind kind = solver_kind_from_name(name);
    double value = score_solver(games, data, metric, kind,
                                reco_config_of(options),
                                rsa_config_of(options));
    text << name << " " << metric_name(metric) << " " << value << "\n";
    results[name] = value;
  }

  json config = scoring_config_json(options, metric);
  config["solvers"] = solver_names;

  if (!options.out_path.empty()) {
    write_file_or_throw(options.out_path, results.dump(2) + "\n");
  }
  out << text.str();
  emit_manifest(manifest_json("eval", config, inputs), options.out_path, out);
  return kExitOk;
}

void add_game_flags(CLI::App* cmd, Options& options) {
  cmd->add_option("--builtin", options.builtins,
                  "Built-in game: quantity or manner (repeatable)")
      ->check(CLI::IsMember({"quantity", "manner"}));
  cmd->add_option("--game", options.game_paths,
                  "Path to a game file (repeatable)");
}

void add_reco_flags(CLI::App* cmd, Options& options) {
  cmd->add_option("--eta-s", options.eta_s, "Speaker learning rate");
  cmd->add_option("--eta-l", options.eta_l, "Listener learning rate");
  cmd->add_option("--iters", options.iters, "Number of update steps");
}

void add_rsa_flags(CLI::App* cmd, Options& options) {
  cmd->add_option("--start", options.start,
                  "Side that is literal at depth 0 (rsa/ibr)")
      ->check(CLI::IsMember({"speaker", "listener"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Regularized-convention, RSA, and best-response solvers for "
               "two-player signaling games"};
  app.require_subcommand(1);
  Options options;

  CLI::App* solve =
      app.add_subcommand("solve", "Solve one game and print its policies");
  add_game_flags(solve, options);
  solve->add_option("--solver", options.solver,
                    "One of reco, rsa, ibr, literal, br")
      ->check(CLI::IsMember({"reco", "rsa", "ibr", "literal", "br"}));
  solve->add_option("--lambda-s", options.lambda_s,
                    "Speaker regularization weight");
  solve->add_option("--lambda-l", options.lambda_l,
                    "Listener regularization weight");
  add_reco_flags(solve, options);
  solve->add_option("--alpha", options.alpha, "RSA rationality");
  solve->add_option("--depth", options.depth, "RSA/IBR recursion depth");
  add_rsa_flags(solve, options);
  solve->add_option("--out", options.out_path, "Write policies as JSON");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Score a solver over a hyperparameter grid, emitting CSV");
  add_game_flags(sweep, options);
  sweep->add_option("--solver", options.solver, "One of reco, rsa")
      ->check(CLI::IsMember({"reco", "rsa"}));
  sweep->add_option("--judgments", options.judgments_path,
                    "Graded judgment file");
  sweep->add_option("--gold", options.gold_path, "Gold label file");
  sweep->add_option("--metric", options.metric,
                    "correlation or top1 (defaults by data kind)")
      ->check(CLI::IsMember({"correlation", "top1"}));
  sweep->add_option("--lambda-s", options.lambda_s_grid,
                    "Speaker lambda grid values (comma separated)")
      ->delimiter(',');
  sweep->add_option("--lambda-l", options.lambda_l_grid,
                    "Listener lambda grid values (comma separated)")
      ->delimiter(',');
  sweep->add_option("--alpha", options.alpha_grid,
                    "RSA alpha grid values (comma separated)")
      ->delimiter(',');
  sweep->add_option("--depth", options.depth_grid,
                    "RSA depth grid values (comma separated)")
      ->delimiter(',');
  add_reco_flags(sweep, options);
  add_rsa_flags(sweep, options);
  sweep->add_option("--out", options.out_path, "Write the per-cell CSV here");

  CLI::App* eval = app.add_subcommand(
      "eval", "Score solvers against judgments or gold labels");
  add_game_flags(eval, options);
  eval->add_option("--solver", options.solvers,
                   "Solver to score (repeatable; default: all)")
      ->check(CLI::IsMember({"reco", "rsa", "ibr", "literal", "br"}));
  eval->add_option("--judgments", options.judgments_path,
                   "Graded judgment file");
  eval->add_option("--gold", options.gold_path, "Gold label file");
  eval->add_option("--metric", options.metric,
                   "correlation or top1 (defaults by data kind)")
      ->check(CLI::IsMember({"correlation", "top1"}));
  eval->add_option("--lambda-s", options.lambda_s,
                   "Speaker regularization weight");
  eval->add_option("--lambda-l", options.lambda_l,
                   "Listener regularization weight");
  add_reco_flags(eval, options);
  eval->add_option("--alpha", options.alpha, "RSA rationality");
  eval->add_option("--depth", options.depth, "RSA/IBR recursion depth");
  add_rsa_flags(eval, options);
  eval->add_option("--out", options.out_path, "Write metrics as JSON");

  std::vector<const char*> argv;
  argv.push_back("reco");
  for (const auto& arg : args) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  try {
    if (solve->parsed()) return cmd_solve(options, out);
    if (sweep->parsed()) return cmd_sweep(options, out);
    if (eval->parsed()) return cmd_eval(options, out);
    err << "no command given\n";
    return kExitInputError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumericError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumericError;
  }
}

}  // namespace reco::cli
