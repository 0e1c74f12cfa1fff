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
// Built-in model problems, reference-game construction, and file I/O for
// games and judgment data.

#ifndef RECO_TASKS_H_
#define RECO_TASKS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reco/game.h"
#include "reco/matrix.h"

namespace reco {

// Quantity ("scalar") implicature game: meanings {NONE, SOME-NOT-ALL, ALL},
// utterances {none, some, all}, uniform prior, zero costs. "some" literally
// covers both SOME-NOT-ALL and ALL; "none" and "all" are unambiguous.
Game build_quantity_game();

// Manner implicature game: meanings {FREQ, RARE} with prior
// (p_freq, 1 - p_freq), utterances {short, long} with costs
// (cost_short, cost_long), and fully uniform default semantics.
// Requires p_freq in (0.5, 1), cost_short >= 0, cost_long > cost_short.
Game build_manner_game(double p_freq, double cost_short, double cost_long);

// One reference-game context: a set of referents, candidate utterances, and
// the listener's default semantics. When tau_speaker is absent it is derived
// by normalizing the transpose of tau_listener (all-zero rows fall back to
// uniform). Prior is uniform over referents; costs are zero.
struct ReferenceContext {
  std::string id;
  std::vector<std::string> referents;
  std::vector<std::string> utterances;
  Matrix tau_listener;                  // |U| x |M|
  std::optional<Matrix> tau_speaker;    // |M| x |U|
};

std::vector<Game> build_reference_games(
    const std::vector<ReferenceContext>& contexts);

// JSON game files. Fields: meanings, utterances, prior, costs, tau_speaker,
// tau_listener, id (optional). Unknown fields are rejected. load(save(g))
// reproduces g entrywise within 1e-12.
Game load_game(const std::string& path);
void save_game(const Game& game, const std::string& path);

// In-memory variants used by the loaders and by tests.
Game game_from_json_text(const std::string& text, const std::string& source);
std::string game_to_json_text(const Game& game);

// A validated, canonically ordered set of judgments. Rows are sorted by
// (game id, utterance index, meaning index) so downstream scores do not
// depend on input order.
class JudgmentSet {
 public:
  struct Row {
    std::string game_id;
    std::size_t utterance = 0;    // index into the game's utterances
    std::size_t meaning = 0;      // index into the game's meanings
    std::string utterance_label;
    std::string meaning_label;
    double score = 0.0;
  };

  // Validates every judgment against the given games: the game must exist,
  // labels must exist in it, scores must lie in [0, 1], and no
  // (game, utterance, meaning) cell may appear twice.
  static JudgmentSet FromJudgments(std::span<const Game> games,
                                   const std::vector<Judgment>& judgments);

  const std::vector<Row>& rows() const { return rows_; }
  std::vector<std::string> game_ids() const;
  bool empty() const { return rows_.empty(); }

 private:
  std::vector<Row> rows_;
};

// JSON judgment files: an array of {game_id, utterance, meaning, score}
// records. Unknown fields are rejected; errors carry the row number.
JudgmentSet load_judgments(const std::string& path,
                           std::span<const Game> games);
JudgmentSet judgments_from_json_text(const std::string& text,
                                     const std::string& source,
                                     std::span<const Game> games);

}  // namespace reco

#endif  // RECO_TASKS_H_
