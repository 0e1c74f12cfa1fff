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

#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "reco/error.h"
#include "reco/tasks.h"

namespace reco {
namespace {

// Synthetic judgments that place probability one on the implicated
// readings of the quantity game.
std::vector<Judgment> perfect_implicature_judgments() {
  std::vector<Judgment> rows;
  auto emit = [&](const std::string& u, const std::string& gold) {
    for (const std::string& m : {"NONE", "SOME-NOT-ALL", "ALL"}) {
      rows.push_back({"quantity", u, m, m == gold ? 1.0 : 0.0});
    }
  };
  emit("none", "NONE");
  emit("some", "SOME-NOT-ALL");
  emit("all", "ALL");
  return rows;
}

TEST_CASE("pearson endpoints and textbook value") {
  std::vector<double> up = {1.0, 2.0, 3.0};
  CHECK(pearson(up, up) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> down = {3.0, 2.0, 1.0};
  CHECK(pearson(up, down) == doctest::Approx(-1.0).epsilon(1e-12));

  std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  std::vector<double> y = {2.0, 1.0, 4.0, 3.0};
  const double oracle = oracles::pearson_textbook(x, y);
  CHECK(oracle == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(pearson(x, y) == doctest::Approx(oracle).epsilon(1e-12));

  std::vector<double> constant = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(pearson(up, constant), UndefinedCorrelationError);
  CHECK_THROWS_AS(pearson(up, x), ShapeError);
  std::vector<double> one = {1.0};
  CHECK_THROWS_AS(pearson(one, one), PreconditionError);
}

TEST_CASE("score_correlation pools across games") {
  Game a("a", {"m0", "m1"}, {"u0", "u1"}, {0.5, 0.5}, {0.0, 0.0},
         uniform_rows(2, 2), uniform_rows(2, 2));
  Game b("b", {"m0", "m1"}, {"u0", "u1"}, {0.5, 0.5}, {0.0, 0.0},
         uniform_rows(2, 2), uniform_rows(2, 2));
  std::vector<Game> games = {a, b};

  ListenerPolicies policies;
  policies["a"] = Matrix::FromRows({{0.9, 0.1}, {0.3, 0.7}});
  policies["b"] = Matrix::FromRows({{0.6, 0.4}, {0.2, 0.8}});

  std::vector<Judgment> rows;
  std::vector<double> human = {0.8, 0.2, 0.4, 0.6, 0.7, 0.3, 0.1, 0.9};
  std::size_t k = 0;
  for (const auto& id : {"a", "b"}) {
    for (const auto& u : {"u0", "u1"}) {
      for (const auto& m : {"m0", "m1"}) {
        rows.push_back({id, u, m, human[k++]});
      }
    }
  }
  JudgmentSet set = JudgmentSet::FromJudgments(games, rows);

  std::vector<double> model = {0.9, 0.1, 0.3, 0.7, 0.6, 0.4, 0.2, 0.8};
  const double oracle = oracles::pearson_textbook(model, human);
  CHECK(score_correlation(policies, set) ==
        doctest::Approx(oracle).epsilon(1e-12));

  // exact agreement scores 1
  ListenerPolicies exact;
  exact["a"] = Matrix::FromRows({{0.8, 0.2}, {0.4, 0.6}});
  exact["b"] = Matrix::FromRows({{0.7, 0.3}, {0.1, 0.9}});
  CHECK(score_correlation(exact, set) == doctest::Approx(1.0).epsilon(1e-12));

  // a uniform model against non-constant humans has no defined correlation
  ListenerPolicies uniform;
  uniform["a"] = uniform_rows(2, 2);
  uniform["b"] = uniform_rows(2, 2);
  CHECK_THROWS_AS(score_correlation(uniform, set),
                  UndefinedCorrelationError);

  // a judgment whose game has no policy is a coverage error
  ListenerPolicies partial;
  partial["a"] = Matrix::FromRows({{0.9, 0.1}, {0.3, 0.7}});
  CHECK_THROWS_WITH_AS(score_correlation(partial, set),
                       doctest::Contains("(b, u0, m0)"), CoverageError);
}

TEST_CASE("score_top1 applies the tie rule") {
  Game game("g", {"m0", "m1"}, {"u0", "u1", "u2"}, {0.5, 0.5},
            {0.0, 0.0, 0.0}, uniform_rows(2, 3), uniform_rows(3, 2));
  std::vector<Game> games = {game};

  // three instances: hit, miss, two-way tie containing the gold meaning
  ListenerPolicies policies;
  policies["g"] = Matrix::FromRows({{0.9, 0.1}, {0.8, 0.2}, {0.5, 0.5}});
  std::vector<Judgment> gold_rows = {{"g", "u0", "m0", 1.0},
                                     {"g", "u1", "m1", 1.0},
                                     {"g", "u2", "m0", 1.0}};
  JudgmentSet gold = JudgmentSet::FromJudgments(games, gold_rows);
  CHECK(score_top1(policies, gold) == doctest::Approx(0.5).epsilon(1e-12));

  // perfect one-hot listener scores 1
  ListenerPolicies perfect;
  perfect["g"] = Matrix::FromRows({{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}});
  CHECK(score_top1(perfect, gold) == doctest::Approx(1.0));

  // uniform listener earns 1/|M| per instance
  ListenerPolicies uniform;
  uniform["g"] = uniform_rows(3, 2);
  CHECK(score_top1(uniform, gold) == doctest::Approx(0.5));

  // two golds for one instance is a data error
  std::vector<Judgment> doubled = {{"g", "u0", "m0", 1.0},
                                   {"g", "u0", "m1", 1.0}};
  CHECK_THROWS_AS(score_top1(policies,
                             JudgmentSet::FromJudgments(games, doubled)),
                  DataError);

  // fractional scores are not gold labels
  std::vector<Judgment> graded = {{"g", "u0", "m0", 0.7}};
  CHECK_THROWS_AS(score_top1(policies,
                             JudgmentSet::FromJudgments(games, graded)),
                  DataError);
}

TEST_CASE("literal listener beats the uniform listener on consistent gold") {
  Game game("g", {"m0", "m1"}, {"u0", "u1"}, {0.5, 0.5}, {0.0, 0.0},
            uniform_rows(2, 2),
            Matrix::FromRows({{0.8, 0.2}, {0.3, 0.7}}));
  std::vector<Game> games = {game};
  std::vector<Judgment> gold_rows = {{"g", "u0", "m0", 1.0},
                                     {"g", "u1", "m1", 1.0}};
  JudgmentSet gold = JudgmentSet::FromJudgments(games, gold_rows);
  ListenerPolicies literal;
  literal["g"] = literal_listener(game);
  ListenerPolicies uniform;
  uniform["g"] = uniform_rows(2, 2);
  CHECK(score_top1(literal, gold) >= score_top1(uniform, gold));
}

TEST_CASE("a 1x1 sweep equals the direct score") {
  std::vector<Game> games = {build_quantity_game()};
  JudgmentSet judgments =
      JudgmentSet::FromJudgments(games, perfect_implicature_judgments());
  SweepGrid grid;
  grid.lambda_speaker = {0.1};
  grid.lambda_listener = {0.1};
  ScoreReport report = run_sweep(games, judgments, Metric::kCorrelation,
                                 SolverKind::kReco, grid, RecoConfig{},
                                 RsaConfig{});
  REQUIRE(report.cells.size() == 1);
  REQUIRE(report.cells[0].metric.has_value());
  const double direct = score_solver(games, judgments, Metric::kCorrelation,
                                     SolverKind::kReco, RecoConfig{},
                                     RsaConfig{});
  CHECK(*report.cells[0].metric == doctest::Approx(direct).epsilon(0.0));
  CHECK(report.best_cell == 0);
}

TEST_CASE("lambda sweep on quantity favors weak listener regularization") {
  std::vector<Game> games = {build_quantity_game()};
  JudgmentSet judgments =
      JudgmentSet::FromJudgments(games, perfect_implicature_judgments());
  SweepGrid grid;
  grid.lambda_speaker = {0.1, 1.0, 10.0};
  grid.lambda_listener = {0.1, 1.0, 10.0};
  RecoConfig base;
  base.iterations = 400;
  ScoreReport report = run_sweep(games, judgments, Metric::kCorrelation,
                                 SolverKind::kReco, grid, base, RsaConfig{});
  CHECK(report.cells.size() == 9);
  REQUIRE(report.best_cell.has_value());
  CHECK(report.cells[*report.best_cell].axis2 == 0.1);
}

TEST_CASE("rsa sweep: alpha is inert at depth zero") {
  std::vector<Game> games = {build_quantity_game()};
  JudgmentSet judgments =
      JudgmentSet::FromJudgments(games, perfect_implicature_judgments());
  SweepGrid grid;
  grid.alpha = {1.0, 2.0, 4.0};
  grid.depth = {0, 1, 2};
  ScoreReport report = run_sweep(games, judgments, Metric::kCorrelation,
                                 SolverKind::kRsa, grid, RecoConfig{},
                                 RsaConfig{});
  REQUIRE(report.cells.size() == 9);
  const double literal_score =
      score_solver(games, judgments, Metric::kCorrelation,
                   SolverKind::kLiteral, RecoConfig{}, RsaConfig{});
  for (const auto& cell : report.cells) {
    if (cell.axis2 == 0.0) {
      REQUIRE(cell.metric.has_value());
      CHECK(*cell.metric == doctest::Approx(literal_score).epsilon(0.0));
    }
  }
}

TEST_CASE("per-cell solve failures are recorded, not fatal") {
  Game dead("dead", {"a", "b"}, {"x", "y"}, {1.0, 0.0}, {0.0, 0.0},
            uniform_rows(2, 2), uniform_rows(2, 2));
  std::vector<Game> games = {dead};
  std::vector<Judgment> rows = {{"dead", "x", "a", 1.0},
                                {"dead", "x", "b", 0.0},
                                {"dead", "y", "a", 0.0},
                                {"dead", "y", "b", 1.0}};
  JudgmentSet judgments = JudgmentSet::FromJudgments(games, rows);
  SweepGrid grid;
  grid.alpha = {1.0};
  grid.depth = {1};
  ScoreReport report = run_sweep(games, judgments, Metric::kCorrelation,
                                 SolverKind::kRsa, grid, RecoConfig{},
                                 RsaConfig{});
  REQUIRE(report.cells.size() == 1);
  CHECK(!report.cells[0].metric.has_value());
  CHECK(report.cells[0].error.find("empty support") != std::string::npos);
  CHECK(!report.best_cell.has_value());
}

TEST_CASE("sweep reports are bit-identical across reruns") {
  std::vector<Game> games = {build_quantity_game()};
  JudgmentSet judgments =
      JudgmentSet::FromJudgments(games, perfect_implicature_judgments());
  SweepGrid grid;
  grid.lambda_speaker = {0.1, 1.0};
  grid.lambda_listener = {0.1, 1.0};
  RecoConfig base;
  base.iterations = 200;
  ScoreReport a = run_sweep(games, judgments, Metric::kCorrelation,
                            SolverKind::kReco, grid, base, RsaConfig{});
  ScoreReport b = run_sweep(games, judgments, Metric::kCorrelation,
                            SolverKind::kReco, grid, base, RsaConfig{});
  CHECK(report_to_csv(a) == report_to_csv(b));
  CHECK(report_to_json(a) == report_to_json(b));
  // header plus one line per cell
  std::string csv = report_to_csv(a);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("solver kind names round trip") {
  for (SolverKind kind : {SolverKind::kReco, SolverKind::kRsa,
                          SolverKind::kIbr, SolverKind::kLiteral,
                          SolverKind::kBr}) {
    CHECK(solver_kind_from_name(solver_kind_name(kind)) == kind);
  }
  CHECK_THROWS_AS(solver_kind_from_name("nope"), PreconditionError);
}

}  // namespace
}  // namespace reco
