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

#ifndef RECO_GAME_H_
#define RECO_GAME_H_

#include <cstddef>
#include <string>
#include <vector>

#include "reco/matrix.h"

namespace reco {

enum class Side { kSpeaker, kListener };

// Tolerance applied to normalization checks on user-supplied inputs.
inline constexpr double kNormalizationTol = 1e-9;

// Anchor entries of exactly zero are raised to this floor (and the row
// renormalized) so that log-anchor terms stay finite.
inline constexpr double kAnchorFloor = 1e-9;

// A two-player signaling game: a speaker observes a meaning drawn from
// `prior`, emits an utterance at cost `costs`, and a listener maps the
// utterance back to a meaning. `tau_speaker` (|M| x |U|) and `tau_listener`
// (|U| x |M|) hold the default semantics both players are anchored to.
//
// Immutable after construction; safe to share across threads.
class Game {
 public:
  // Validates all invariants (throws InvariantError naming the failed one),
  // then floors zero anchor entries and renormalizes anchor rows and prior.
  Game(std::string id, std::vector<std::string> meanings,
       std::vector<std::string> utterances, std::vector<double> prior,
       std::vector<double> costs, Matrix tau_speaker, Matrix tau_listener);

  const std::string& id() const { return id_; }
  const std::vector<std::string>& meanings() const { return meanings_; }
  const std::vector<std::string>& utterances() const { return utterances_; }
  const std::vector<double>& prior() const { return prior_; }
  const std::vector<double>& costs() const { return costs_; }
  const Matrix& tau_speaker() const { return tau_speaker_; }
  const Matrix& tau_listener() const { return tau_listener_; }

  std::size_t num_meanings() const { return meanings_.size(); }
  std::size_t num_utterances() const { return utterances_.size(); }

  // Index lookups throw IndexError on unknown labels.
  std::size_t meaning_index(const std::string& label) const;
  std::size_t utterance_index(const std::string& label) const;

  double max_cost() const;

 private:
  std::string id_;
  std::vector<std::string> meanings_;
  std::vector<std::string> utterances_;
  std::vector<double> prior_;
  std::vector<double> costs_;
  Matrix tau_speaker_;
  Matrix tau_listener_;
};

// A speaker policy (|M| x |U|) together with a listener policy (|U| x |M|).
// Rows are validated to be probability distributions at construction.
struct PolicyPair {
  PolicyPair(Matrix speaker_policy, Matrix listener_policy);

  Matrix speaker;
  Matrix listener;
};

// One human judgment (graded score) or gold flag for a single
// (game, utterance, meaning) cell.
struct Judgment {
  std::string game_id;
  std::string utterance;
  std::string meaning;
  double score = 0.0;
};

// r_S(m, u, m') = -c(u) + 1[m' = m]
double reward_speaker(const Game& game, std::size_t m, std::size_t u,
                      std::size_t m_prime);

// r_L(m, u, m') = 1[m' = m]; depends only on communicative success.
double reward_listener(const Game& game, std::size_t m, std::size_t m_prime);

// Expected payoff of `side` when m ~ prior, u ~ speaker(.|m),
// m' ~ listener(.|u). Computed in closed form from the matrices.
double expected_utility(const Game& game, const PolicyPair& policies,
                        Side side);

// Prior-weighted KL of the speaker rows to tau_speaker, or the uniformly
// weighted (1/|U|) KL of the listener rows to tau_listener. Returns
// +infinity when a policy row puts mass on an anchor-zero entry.
double kl_to_anchor(const Game& game, const PolicyPair& policies, Side side);

// expected_utility - lambda * kl_to_anchor, lambda >= 0.
double regularized_utility(const Game& game, const PolicyPair& policies,
                           Side side, double lambda);

}  // namespace reco

#endif  // RECO_GAME_H_
