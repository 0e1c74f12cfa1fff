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

#include "reco/game.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "reco/error.h"

namespace reco {
namespace {

void check_labels_unique(const std::vector<std::string>& labels,
                         const std::string& which) {
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      throw InvariantError("duplicate " + which + " label '" + label + "'");
    }
  }
}

void check_row_stochastic(const Matrix& m, const std::string& which) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (double v : m.row(r)) {
      if (!(v >= 0.0)) {
        throw InvariantError(which + " row " + std::to_string(r) +
                             " has a negative entry");
      }
      sum += v;
    }
    if (std::fabs(sum - 1.0) > kNormalizationTol) {
      throw InvariantError(which + " row " + std::to_string(r) +
                           " normalization: sum is " + std::to_string(sum));
    }
  }
}

// Raises exact zeros to the anchor floor and renormalizes each row.
void floor_anchor(Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    double sum = 0.0;
    for (double& v : row) {
      if (v == 0.0) v = kAnchorFloor;
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
}

void check_index(std::size_t i, std::size_t size, const std::string& what) {
  if (i >= size) {
    throw IndexError(what + " index " + std::to_string(i) +
                     " out of range [0, " + std::to_string(size) + ")");
  }
}

void check_policy_shapes(const Game& game, const PolicyPair& policies) {
  if (policies.speaker.rows() != game.num_meanings() ||
      policies.speaker.cols() != game.num_utterances() ||
      policies.listener.rows() != game.num_utterances() ||
      policies.listener.cols() != game.num_meanings()) {
    throw ShapeError("policy dimensions do not match game '" + game.id() +
                     "' (|M|=" + std::to_string(game.num_meanings()) +
                     ", |U|=" + std::to_string(game.num_utterances()) + ")");
  }
}

}  // namespace

Game::Game(std::string id, std::vector<std::string> meanings,
           std::vector<std::string> utterances, std::vector<double> prior,
           std::vector<double> costs, Matrix tau_speaker, Matrix tau_listener)
    : id_(std::move(id)),
      meanings_(std::move(meanings)),
      utterances_(std::move(utterances)),
      prior_(std::move(prior)),
      costs_(std::move(costs)),
      tau_speaker_(std::move(tau_speaker)),
      tau_listener_(std::move(tau_listener)) {
  if (meanings_.empty() || utterances_.empty()) {
    throw InvariantError("game '" + id_ +
                         "' needs at least one meaning and one utterance");
  }
  check_labels_unique(meanings_, "meaning");
  check_labels_unique(utterances_, "utterance");

  if (prior_.size() != meanings_.size()) {
    throw ShapeError("prior has length " + std::to_string(prior_.size()) +
                     ", expected " + std::to_string(meanings_.size()));
  }
  double prior_sum = 0.0;
  for (double p : prior_) {
    if (!(p >= 0.0)) throw InvariantError("prior has a negative entry");
    prior_sum += p;
  }
  if (std::fabs(prior_sum - 1.0) > kNormalizationTol) {
    throw InvariantError("prior normalization: sum is " +
                         std::to_string(prior_sum));
  }
  for (double& p : prior_) p /= prior_sum;

  if (costs_.size() != utterances_.size()) {
    throw ShapeError("costs has length " + std::to_string(costs_.size()) +
                     ", expected " + std::to_string(utterances_.size()));
  }
  for (double c : costs_) {
    if (!(c >= 0.0)) throw InvariantError("costs has a negative entry");
  }

  if (tau_speaker_.rows() != meanings_.size() ||
      tau_speaker_.cols() != utterances_.size()) {
    throw ShapeError("tau_speaker must be |M| x |U|");
  }
  if (tau_listener_.rows() != utterances_.size() ||
      tau_listener_.cols() != meanings_.size()) {
    throw ShapeError("tau_listener must be |U| x |M|");
  }
  check_row_stochastic(tau_speaker_, "tau_speaker");
  check_row_stochastic(tau_listener_, "tau_listener");
  floor_anchor(tau_speaker_);
  floor_anchor(tau_listener_);
}

std::size_t Game::meaning_index(const std::string& label) const {
  auto it = std::find(meanings_.begin(), meanings_.end(), label);
  if (it == meanings_.end()) {
    throw IndexError("unknown meaning '" + label + "' in game '" + id_ + "'");
  }
  return static_cast<std::size_t>(it - meanings_.begin());
}

std::size_t Game::utterance_index(const std::string& label) const {
  auto it = std::find(utterances_.begin(), utterances_.end(), label);
  if (it == utterances_.end()) {
    throw IndexError("unknown utterance '" + label + "' in game '" + id_ +
                     "'");
  }
  return static_cast<std::size_t>(it - utterances_.begin());
}

double Game::max_cost() const {
  return *std::max_element(costs_.begin(), costs_.end());
}

PolicyPair::PolicyPair(Matrix speaker_policy, Matrix listener_policy)
    : speaker(std::move(speaker_policy)), listener(std::move(listener_policy)) {
  if (speaker.rows() != listener.cols() || speaker.cols() != listener.rows()) {
    throw ShapeError("speaker (" + std::to_string(speaker.rows()) + "x" +
                     std::to_string(speaker.cols()) +
                     ") and listener (" + std::to_string(listener.rows()) +
                     "x" + std::to_string(listener.cols()) +
                     ") policies have incompatible shapes");
  }
  if (!is_row_stochastic(speaker, kNormalizationTol)) {
    throw InvariantError("speaker policy rows are not distributions");
  }
  if (!is_row_stochastic(listener, kNormalizationTol)) {
    throw InvariantError("listener policy rows are not distributions");
  }
}

double reward_speaker(const Game& game, std::size_t m, std::size_t u,
                      std::size_t m_prime) {
  check_index(m, game.num_meanings(), "meaning");
  check_index(u, game.num_utterances(), "utterance");
  check_index(m_prime, game.num_meanings(), "interpretation");
  return -game.costs()[u] + (m_prime == m ? 1.0 : 0.0);
}

double reward_listener(const Game& game, std::size_t m, std::size_t m_prime) {
  check_index(m, game.num_meanings(), "meaning");
  check_index(m_prime, game.num_meanings(), "interpretation");
  return m_prime == m ? 1.0 : 0.0;
}

double expected_utility(const Game& game, const PolicyPair& policies,
                        Side side) {
  check_policy_shapes(game, policies);
  const Matrix& speaker = policies.speaker;
  const Matrix& listener = policies.listener;
  // E[1[m'=m]] collapses the inner sum over interpretations to L(m|u).
  double success = 0.0;
  for (std::size_t m = 0; m < game.num_meanings(); ++m) {
    double row = 0.0;
    for (std::size_t u = 0; u < game.num_utterances(); ++u) {
      row += speaker(m, u) * listener(u, m);
    }
    success += game.prior()[m] * row;
  }
  if (side == Side::kListener) return success;
  double cost = 0.0;
  for (std::size_t m = 0; m < game.num_meanings(); ++m) {
    double row = 0.0;
    for (std::size_t u = 0; u < game.num_utterances(); ++u) {
      row += speaker(m, u) * game.costs()[u];
    }
    cost += game.prior()[m] * row;
  }
  return success - cost;
}

double kl_to_anchor(const Game& game, const PolicyPair& policies, Side side) {
  check_policy_shapes(game, policies);
  if (side == Side::kSpeaker) {
    double sum = 0.0;
    for (std::size_t m = 0; m < game.num_meanings(); ++m) {
      sum += game.prior()[m] *
             kl_divergence(policies.speaker.row(m), game.tau_speaker().row(m));
    }
    return sum;
  }
  double sum = 0.0;
  for (std::size_t u = 0; u < game.num_utterances(); ++u) {
    sum += kl_divergence(policies.listener.row(u), game.tau_listener().row(u));
  }
  return sum / static_cast<double>(game.num_utterances());
}

double regularized_utility(const Game& game, const PolicyPair& policies,
                           Side side, double lambda) {
  if (!(lambda >= 0.0)) {
    throw PreconditionError("regularized_utility: lambda must be >= 0");
  }
  return expected_utility(game, policies, side) -
         lambda * kl_to_anchor(game, policies, side);
}

}  // namespace reco
