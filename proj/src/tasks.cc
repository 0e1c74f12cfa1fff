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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "json.hpp"
#include "reco/error.h"

namespace reco {
namespace {

using nlohmann::json;

const std::set<std::string> kGameFields = {
    "id",    "meanings",    "utterances",  "prior",
    "costs", "tau_speaker", "tau_listener"};

const std::set<std::string> kJudgmentFields = {"game_id", "utterance",
                                               "meaning", "score"};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ParseError("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw ParseError("failed writing '" + path + "'");
  }
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

void reject_unknown_fields(const json& object,
                           const std::set<std::string>& allowed,
                           const std::string& source) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.count(key)) {
      throw ParseError(source + ": unknown field '" + key + "'");
    }
  }
}

std::vector<std::string> string_list(const json& value,
                                     const std::string& source,
                                     const std::string& field) {
  if (!value.is_array()) {
    throw ParseError(source + ": field '" + field + "' must be an array");
  }
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) {
      throw ParseError(source + ": field '" + field +
                       "' must contain strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<double> number_list(const json& value, const std::string& source,
                                const std::string& field) {
  if (!value.is_array()) {
    throw ParseError(source + ": field '" + field + "' must be an array");
  }
  std::vector<double> out;
  for (const auto& item : value) {
    if (!item.is_number()) {
      throw ParseError(source + ": field '" + field +
                       "' must contain numbers");
    }
    out.push_back(item.get<double>());
  }
  return out;
}

// Matrices are arrays of row arrays; every row must reference exactly the
// declared column labels.
Matrix matrix_field(const json& value, const std::string& source,
                    const std::string& field, std::size_t expect_rows,
                    std::size_t expect_cols, const std::string& cols_name) {
  if (!value.is_array() || value.size() != expect_rows) {
    throw ParseError(source + ": field '" + field + "' must be an array of " +
                     std::to_string(expect_rows) + " rows");
  }
  Matrix m(expect_rows, expect_cols);
  for (std::size_t r = 0; r < expect_rows; ++r) {
    std::vector<double> row =
        number_list(value[r], source, field + " row " + std::to_string(r));
    if (row.size() != expect_cols) {
      throw ParseError(source + ": " + field + " row " + std::to_string(r) +
                       " references " + std::to_string(row.size()) + " " +
                       cols_name + " but the game declares " +
                       std::to_string(expect_cols));
    }
    std::copy(row.begin(), row.end(), m.row(r).begin());
  }
  return m;
}

json required_field(const json& object, const std::string& source,
                    const std::string& field) {
  if (!object.contains(field)) {
    throw ParseError(source + ": missing field '" + field + "'");
  }
  return object.at(field);
}

std::string path_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

}  // namespace

Game build_quantity_game() {
  std::vector<std::string> meanings = {"NONE", "SOME-NOT-ALL", "ALL"};
  std::vector<std::string> utterances = {"none", "some", "all"};
  std::vector<double> prior = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::vector<double> costs = {0.0, 0.0, 0.0};
  // Truth conditions, row-normalized per meaning: "some" literally covers
  // both SOME-NOT-ALL and ALL.
  Matrix tau_speaker = Matrix::FromRows({{1.0, 0.0, 0.0},
                                         {0.0, 1.0, 0.0},
                                         {0.0, 0.5, 0.5}});
  Matrix tau_listener = Matrix::FromRows({{1.0, 0.0, 0.0},
                                          {0.0, 0.5, 0.5},
                                          {0.0, 0.0, 1.0}});
  return Game("quantity", std::move(meanings), std::move(utterances),
              std::move(prior), std::move(costs), std::move(tau_speaker),
              std::move(tau_listener));
}

Game build_manner_game(double p_freq, double cost_short, double cost_long) {
  if (!(p_freq > 0.5 && p_freq < 1.0)) {
    throw PreconditionError("build_manner_game: p_freq must lie in (0.5, 1)");
  }
  if (!(cost_short >= 0.0)) {
    throw PreconditionError("build_manner_game: cost_short must be >= 0");
  }
  if (!(cost_long > cost_short)) {
    throw PreconditionError(
        "build_manner_game: cost_long must exceed cost_short");
  }
  std::vector<std::string> meanings = {"FREQ", "RARE"};
  std::vector<std::string> utterances = {"short", "long"};
  std::vector<double> prior = {p_freq, 1.0 - p_freq};
  std::vector<double> costs = {cost_short, cost_long};
  // Either utterance may, by default, denote either meaning.
  Matrix tau = uniform_rows(2, 2);
  return Game("manner", std::move(meanings), std::move(utterances),
              std::move(prior), std::move(costs), tau, tau);
}

std::vector<Game> build_reference_games(
    const std::vector<ReferenceContext>& contexts) {
  std::vector<Game> games;
  games.reserve(contexts.size());
  for (const auto& context : contexts) {
    const std::size_t num_m = context.referents.size();
    const std::size_t num_u = context.utterances.size();
    if (context.tau_listener.rows() != num_u ||
        context.tau_listener.cols() != num_m) {
      throw ShapeError("reference context '" + context.id +
                       "': tau_listener must be |U| x |M|");
    }
    Matrix tau_speaker;
    if (context.tau_speaker.has_value()) {
      tau_speaker = *context.tau_speaker;
      if (tau_speaker.rows() != num_m || tau_speaker.cols() != num_u) {
        throw ShapeError("reference context '" + context.id +
                         "': tau_speaker must be |M| x |U|");
      }
    } else {
      // Derive production semantics from comprehension semantics; referents
      // no utterance ever denotes fall back to a uniform row.
      tau_speaker = context.tau_listener.transposed();
      for (std::size_t m = 0; m < num_m; ++m) {
        auto row = tau_speaker.row(m);
        double sum = 0.0;
        for (double v : row) sum += v;
        if (sum > 0.0) {
          for (double& v : row) v /= sum;
        } else {
          for (double& v : row) v = 1.0 / static_cast<double>(num_u);
        }
      }
    }
    std::vector<double> prior(num_m, 1.0 / static_cast<double>(num_m));
    std::vector<double> costs(num_u, 0.0);
    games.emplace_back(context.id, context.referents, context.utterances,
                       std::move(prior), std::move(costs),
                       std::move(tau_speaker), context.tau_listener);
  }
  return games;
}

Game game_from_json_text(const std::string& text, const std::string& source) {
  json doc = parse_json(text, source);
  if (!doc.is_object()) {
    throw ParseError(source + ": game document must be a JSON object");
  }
  reject_unknown_fields(doc, kGameFields, source);

  std::vector<std::string> meanings =
      string_list(required_field(doc, source, "meanings"), source, "meanings");
  std::vector<std::string> utterances = string_list(
      required_field(doc, source, "utterances"), source, "utterances");
  std::vector<double> prior =
      number_list(required_field(doc, source, "prior"), source, "prior");
  std::vector<double> costs =
      number_list(required_field(doc, source, "costs"), source, "costs");
  Matrix tau_speaker = matrix_field(
      required_field(doc, source, "tau_speaker"), source, "tau_speaker",
      meanings.size(), utterances.size(), "utterances");
  Matrix tau_listener = matrix_field(
      required_field(doc, source, "tau_listener"), source, "tau_listener",
      utterances.size(), meanings.size(), "meanings");

  std::string id = source;
  if (doc.contains("id")) {
    if (!doc["id"].is_string()) {
      throw ParseError(source + ": field 'id' must be a string");
    }
    id = doc["id"].get<std::string>();
  }

  try {
    return Game(std::move(id), std::move(meanings), std::move(utterances),
                std::move(prior), std::move(costs), std::move(tau_speaker),
                std::move(tau_listener));
  } catch (const InputError& e) {
    throw InvariantError(source + ": " + e.what());
  }
}

Game load_game(const std::string& path) {
  return game_from_json_text(read_file(path), path_stem(path));
}

std::string game_to_json_text(const Game& game) {
  json doc;
  doc["id"] = game.id();
  doc["meanings"] = game.meanings();
  doc["utterances"] = game.utterances();
  doc["prior"] = game.prior();
  doc["costs"] = game.costs();
  auto matrix_rows = [](const Matrix& m) {
    std::vector<std::vector<double>> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
      rows.emplace_back(m.row(r).begin(), m.row(r).end());
    }
    return rows;
  };
  doc["tau_speaker"] = matrix_rows(game.tau_speaker());
  doc["tau_listener"] = matrix_rows(game.tau_listener());
  return doc.dump(2) + "\n";
}

void save_game(const Game& game, const std::string& path) {
  write_file(path, game_to_json_text(game));
}

JudgmentSet JudgmentSet::FromJudgments(std::span<const Game> games,
                                       const std::vector<Judgment>& judgments) {
  std::map<std::string, const Game*> by_id;
  for (const Game& game : games) by_id[game.id()] = &game;

  JudgmentSet set;
  std::set<std::tuple<std::string, std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < judgments.size(); ++i) {
    const Judgment& j = judgments[i];
    const std::string where = "judgment row " + std::to_string(i);
    auto it = by_id.find(j.game_id);
    if (it == by_id.end()) {
      throw DataError(where + ": unknown game '" + j.game_id + "'");
    }
    const Game& game = *it->second;
    Row row;
    row.game_id = j.game_id;
    try {
      row.utterance = game.utterance_index(j.utterance);
      row.meaning = game.meaning_index(j.meaning);
    } catch (const IndexError& e) {
      throw DataError(where + ": " + e.what());
    }
    row.utterance_label = j.utterance;
    row.meaning_label = j.meaning;
    if (!(j.score >= 0.0 && j.score <= 1.0)) {
      throw DataError(where + ": score must lie in [0, 1]");
    }
    row.score = j.score;
    if (!seen.insert({row.game_id, row.utterance, row.meaning}).second) {
      throw DataError(where + ": duplicate cell (" + j.game_id + ", " +
                      j.utterance + ", " + j.meaning + ")");
    }
    set.rows_.push_back(std::move(row));
  }
  std::sort(set.rows_.begin(), set.rows_.end(),
            [](const Row& a, const Row& b) {
              return std::tie(a.game_id, a.utterance, a.meaning) <
                     std::tie(b.game_id, b.utterance, b.meaning);
            });
  return set;
}

std::vector<std::string> JudgmentSet::game_ids() const {
  std::vector<std::string> ids;
  for (const Row& row : rows_) {
    if (ids.empty() || ids.back() != row.game_id) ids.push_back(row.game_id);
  }
  return ids;
}

JudgmentSet judgments_from_json_text(const std::string& text,
                                     const std::string& source,
                                     std::span<const Game> games) {
  json doc = parse_json(text, source);
  if (!doc.is_array()) {
    throw ParseError(source + ": judgment document must be a JSON array");
  }
  std::vector<Judgment> judgments;
  judgments.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& item = doc[i];
    const std::string where = source + " row " + std::to_string(i);
    if (!item.is_object()) {
      throw ParseError(where + ": must be an object");
    }
    reject_unknown_fields(item, kJudgmentFields, where);
    Judgment j;
    json game_id = required_field(item, where, "game_id");
    json utterance = required_field(item, where, "utterance");
    json meaning = required_field(item, where, "meaning");
    json score = required_field(item, where, "score");
    if (!game_id.is_string() || !utterance.is_string() ||
        !meaning.is_string() || !score.is_number()) {
      throw ParseError(where + ": expected string labels and numeric score");
    }
    j.game_id = game_id.get<std::string>();
    j.utterance = utterance.get<std::string>();
    j.meaning = meaning.get<std::string>();
    j.score = score.get<double>();
    judgments.push_back(std::move(j));
  }
  return JudgmentSet::FromJudgments(games, judgments);
}

JudgmentSet load_judgments(const std::string& path,
                           std::span<const Game> games) {
  return judgments_from_json_text(read_file(path), path_stem(path), games);
}

}  // namespace reco
