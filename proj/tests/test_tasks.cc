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

#include "reco/tasks.h"

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "reco/error.h"

namespace reco {
namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

TEST_CASE("quantity game structure") {
  Game game = build_quantity_game();
  CHECK(game.meanings() ==
        std::vector<std::string>{"NONE", "SOME-NOT-ALL", "ALL"});
  CHECK(game.utterances() == std::vector<std::string>{"none", "some", "all"});
  for (double p : game.prior()) CHECK(p == doctest::Approx(1.0 / 3));
  for (double c : game.costs()) CHECK(c == 0.0);
  const std::size_t some = game.utterance_index("some");
  CHECK(game.tau_listener()(some, 0) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(game.tau_listener()(some, 1) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(game.tau_listener()(some, 2) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(game.tau_listener()(game.utterance_index("none"), 0) ==
        doctest::Approx(1.0).epsilon(1e-6));
  const std::size_t all = game.meaning_index("ALL");
  CHECK(game.tau_speaker()(all, 0) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(game.tau_speaker()(all, 1) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(game.tau_speaker()(all, 2) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(is_row_stochastic(game.tau_speaker(), 1e-9));
  CHECK(is_row_stochastic(game.tau_listener(), 1e-9));
}

TEST_CASE("manner game parameters and preconditions") {
  Game game = build_manner_game(0.75, 0.1, 0.4);
  CHECK(game.prior() == std::vector<double>{0.75, 0.25});
  CHECK(game.costs() == std::vector<double>{0.1, 0.4});
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(game.tau_speaker()(r, c) == 0.5);
      CHECK(game.tau_listener()(r, c) == 0.5);
    }
  }
  CHECK_NOTHROW(build_manner_game(0.9, 0.0, 0.5));
  CHECK_THROWS_AS(build_manner_game(0.5, 0.1, 0.2), PreconditionError);
  CHECK_THROWS_AS(build_manner_game(1.0, 0.1, 0.2), PreconditionError);
  CHECK_THROWS_AS(build_manner_game(0.75, -0.1, 0.2), PreconditionError);
  CHECK_THROWS_AS(build_manner_game(0.75, 0.3, 0.3), PreconditionError);
}

TEST_CASE("manner game is symmetric under meaning relabeling") {
  Game game = build_manner_game(0.7, 0.05, 0.25);
  // permuting the meaning axis: prior inverts, anchors stay uniform
  Game permuted("manner-perm", {"RARE", "FREQ"}, game.utterances(),
                {game.prior()[1], game.prior()[0]}, game.costs(),
                game.tau_speaker(), game.tau_listener());
  CHECK(permuted.prior()[0] == doctest::Approx(1.0 - 0.7));
  CHECK(permuted.tau_speaker()(0, 0) == 0.5);
  CHECK(permuted.meaning_index("FREQ") == 1);
}

TEST_CASE("reference game construction") {
  ReferenceContext context;
  context.id = "ctx0";
  context.referents = {"r0", "r1", "r2"};
  context.utterances.clear();
  for (int i = 0; i < 16; ++i) {
    context.utterances.push_back("u" + std::to_string(i));
  }
  context.tau_listener = uniform_rows(16, 3);
  std::vector<Game> games = build_reference_games({context});
  REQUIRE(games.size() == 1);
  CHECK(games[0].num_meanings() == 3);
  CHECK(games[0].num_utterances() == 16);
  CHECK(games[0].prior()[0] == doctest::Approx(1.0 / 3));
  CHECK(is_row_stochastic(games[0].tau_speaker(), 1e-9));

  // identity semantics on two referents solves trivially
  ReferenceContext tiny;
  tiny.id = "tiny";
  tiny.referents = {"a", "b"};
  tiny.utterances = {"x", "y"};
  tiny.tau_listener = Matrix::FromRows({{1.0, 0.0}, {0.0, 1.0}});
  Game game = build_reference_games({tiny}).front();
  CHECK(game.tau_speaker()(0, 0) == doctest::Approx(1.0).epsilon(1e-6));

  // shared utterance vocabulary, independent games
  ReferenceContext second = tiny;
  second.id = "tiny2";
  second.tau_listener = Matrix::FromRows({{0.5, 0.5}, {0.2, 0.8}});
  std::vector<Game> batch = build_reference_games({tiny, second});
  CHECK(batch.size() == 2);
  CHECK(batch[0].id() == "tiny");
  CHECK(batch[1].id() == "tiny2");
  CHECK(batch[1].tau_listener()(0, 0) == doctest::Approx(0.5).epsilon(1e-9));

  ReferenceContext bad = tiny;
  bad.tau_listener = uniform_rows(3, 2);
  CHECK_THROWS_AS(build_reference_games({bad}), ShapeError);
}

TEST_CASE("game files round trip within 1e-12") {
  for (const Game& game : {build_quantity_game(),
                           build_manner_game(0.75, 0.1, 0.4)}) {
    auto path = temp_file("roundtrip_" + game.id() + ".json");
    save_game(game, path.string());
    Game loaded = load_game(path.string());
    CHECK(loaded.id() == game.id());
    CHECK(loaded.meanings() == game.meanings());
    CHECK(loaded.utterances() == game.utterances());
    for (std::size_t m = 0; m < game.num_meanings(); ++m) {
      CHECK(std::fabs(loaded.prior()[m] - game.prior()[m]) < 1e-12);
    }
    CHECK(max_abs_diff(loaded.tau_speaker(), game.tau_speaker()) < 1e-12);
    CHECK(max_abs_diff(loaded.tau_listener(), game.tau_listener()) < 1e-12);
    std::filesystem::remove(path);
  }
}

TEST_CASE("game loader names the violated invariant") {
  const std::string bad_prior = R"({
    "id": "g", "meanings": ["a", "b"], "utterances": ["x", "y"],
    "prior": [0.5, 0.4], "costs": [0, 0],
    "tau_speaker": [[0.5, 0.5], [0.5, 0.5]],
    "tau_listener": [[0.5, 0.5], [0.5, 0.5]]})";
  CHECK_THROWS_WITH_AS(game_from_json_text(bad_prior, "bad"),
                       doctest::Contains("prior normalization"),
                       InvariantError);

  // a tau row referencing a fourth utterance the game does not declare
  const std::string extra_column = R"({
    "id": "g", "meanings": ["a", "b"], "utterances": ["x", "y"],
    "prior": [0.5, 0.5], "costs": [0, 0],
    "tau_speaker": [[0.4, 0.3, 0.3], [0.5, 0.5]],
    "tau_listener": [[0.5, 0.5], [0.5, 0.5]]})";
  CHECK_THROWS_WITH_AS(game_from_json_text(extra_column, "bad"),
                       doctest::Contains("row 0 references 3 utterances"),
                       ParseError);

  CHECK_THROWS_AS(game_from_json_text("{not json", "bad"), ParseError);
  CHECK_THROWS_WITH_AS(
      game_from_json_text(R"({"meanings": ["a"], "mystery": 1})", "bad"),
      doctest::Contains("unknown field 'mystery'"), ParseError);
  CHECK_THROWS_WITH_AS(game_from_json_text(R"({"meanings": ["a"]})", "bad"),
                       doctest::Contains("missing field"), ParseError);
  CHECK_THROWS_AS(load_game("/nonexistent/game.json"), ParseError);
}

TEST_CASE("judgment loading validates rows") {
  std::vector<Game> games;
  games.push_back(build_quantity_game());

  // full coverage of one game: |U| * |M| rows
  std::vector<Judgment> rows;
  for (const auto& u : games[0].utterances()) {
    for (const auto& m : games[0].meanings()) {
      rows.push_back({"quantity", u, m, u == "some" ? 0.5 : 0.0});
    }
  }
  JudgmentSet set = JudgmentSet::FromJudgments(games, rows);
  CHECK(set.rows().size() == 9);
  CHECK(set.game_ids() == std::vector<std::string>{"quantity"});

  CHECK_THROWS_AS(JudgmentSet::FromJudgments(
                      games, {{"quantity", "some", "ALL", 1.2}}),
                  DataError);
  CHECK_THROWS_AS(JudgmentSet::FromJudgments(
                      games, {{"missing", "some", "ALL", 0.5}}),
                  DataError);
  CHECK_THROWS_AS(JudgmentSet::FromJudgments(
                      games, {{"quantity", "some", "WRONG", 0.5}}),
                  DataError);
  CHECK_THROWS_WITH_AS(
      JudgmentSet::FromJudgments(games,
                                 {{"quantity", "some", "ALL", 0.5},
                                  {"quantity", "some", "ALL", 0.5}}),
      doctest::Contains("duplicate"), DataError);
}

TEST_CASE("judgment rows are canonically ordered regardless of input order") {
  std::vector<Game> games;
  games.push_back(build_quantity_game());
  std::vector<Judgment> forward = {{"quantity", "none", "NONE", 1.0},
                                   {"quantity", "some", "ALL", 0.3}};
  std::vector<Judgment> backward = {{"quantity", "some", "ALL", 0.3},
                                    {"quantity", "none", "NONE", 1.0}};
  JudgmentSet a = JudgmentSet::FromJudgments(games, forward);
  JudgmentSet b = JudgmentSet::FromJudgments(games, backward);
  REQUIRE(a.rows().size() == b.rows().size());
  for (std::size_t i = 0; i < a.rows().size(); ++i) {
    CHECK(a.rows()[i].utterance == b.rows()[i].utterance);
    CHECK(a.rows()[i].meaning == b.rows()[i].meaning);
    CHECK(a.rows()[i].score == b.rows()[i].score);
  }
}

TEST_CASE("judgment file parsing") {
  std::vector<Game> games;
  games.push_back(build_quantity_game());
  const std::string good = R"([
    {"game_id": "quantity", "utterance": "some", "meaning": "ALL",
     "score": 0.25}])";
  JudgmentSet set = judgments_from_json_text(good, "j", games);
  CHECK(set.rows().size() == 1);
  CHECK(set.rows()[0].score == 0.25);

  CHECK_THROWS_WITH_AS(
      judgments_from_json_text(
          R"([{"game_id": "quantity", "utterance": "some",
               "meaning": "ALL", "score": 0.25, "extra": 1}])",
          "j", games),
      doctest::Contains("unknown field 'extra'"), ParseError);
  CHECK_THROWS_AS(judgments_from_json_text(R"({"not": "array"})", "j", games),
                  ParseError);
  CHECK_THROWS_AS(load_judgments("/nonexistent/j.json", games), ParseError);
}

TEST_CASE("loading a saved game from disk applies no further flooring") {
  Game game = build_quantity_game();
  auto path = temp_file("idempotent.json");
  save_game(game, path.string());
  Game once = load_game(path.string());
  save_game(once, path.string());
  Game twice = load_game(path.string());
  CHECK(max_abs_diff(once.tau_listener(), twice.tau_listener()) < 1e-15);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace reco
