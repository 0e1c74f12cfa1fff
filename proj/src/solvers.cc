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

#include "reco/solvers.h"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "reco/error.h"

namespace reco {
namespace {

void check_positive(double v, const std::string& name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw PreconditionError("solver config: " + name + " must be positive");
  }
}

void validate(const RecoConfig& config) {
  check_positive(config.lambda_speaker, "lambda_speaker");
  check_positive(config.lambda_listener, "lambda_listener");
  check_positive(config.eta_speaker, "eta_speaker");
  check_positive(config.eta_listener, "eta_listener");
  if (config.iterations < 1) {
    throw PreconditionError("solver config: iterations must be >= 1");
  }
}

Matrix log_of(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out(r, c) = std::log(m(r, c));
    }
  }
  return out;
}

// next row-prop exp{ (gradient + lambda * log_anchor) / denom }
Matrix exponentiated_step(const Matrix& gradient, const Matrix& log_anchor,
                          double lambda, double denom, int iteration) {
  Matrix next(gradient.rows(), gradient.cols());
  for (std::size_t r = 0; r < gradient.rows(); ++r) {
    for (std::size_t c = 0; c < gradient.cols(); ++c) {
      double e = (gradient(r, c) + lambda * log_anchor(r, c)) / denom;
      if (!std::isfinite(e)) {
        throw NumericError("non-finite exponent at iteration " +
                           std::to_string(iteration) + ", entry (" +
                           std::to_string(r) + ", " + std::to_string(c) + ")");
      }
      next(r, c) = e;
    }
  }
  row_softmax(next);
  return next;
}

// avg <- (t * avg + next) / (t + 1), rows renormalized to absorb drift.
void fold_average(Matrix& avg, const Matrix& next, int t) {
  const double keep = static_cast<double>(t) / (t + 1.0);
  const double add = 1.0 / (t + 1.0);
  for (std::size_t r = 0; r < avg.rows(); ++r) {
    for (std::size_t c = 0; c < avg.cols(); ++c) {
      avg(r, c) = keep * avg(r, c) + add * next(r, c);
    }
  }
  row_normalize(avg);
}

// Sum over rows of KL(policy row || anchor row), unweighted. This is the
// regularizer the dynamics actually optimize: their iterates converge
// row-wise to softmax(gradient/lambda + log tau), the exact best response
// of utility - lambda * sum_rows KL.
double row_sum_kl(const Matrix& policy, const Matrix& anchor) {
  double sum = 0.0;
  for (std::size_t r = 0; r < policy.rows(); ++r) {
    sum += kl_divergence(policy.row(r), anchor.row(r));
  }
  return sum;
}

// Value of the best (mixed) response to the gradient under the row-sum KL
// regularizer: sum over rows of lambda * log sum_c tau(r,c) exp(g(r,c) /
// lambda), evaluated stably.
double best_response_value(const Matrix& gradient, const Matrix& log_anchor,
                           double lambda) {
  double total = 0.0;
  for (std::size_t r = 0; r < gradient.rows(); ++r) {
    double max = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < gradient.cols(); ++c) {
      max = std::max(max, gradient(r, c) / lambda + log_anchor(r, c));
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < gradient.cols(); ++c) {
      sum += std::exp(gradient(r, c) / lambda + log_anchor(r, c) - max);
    }
    total += lambda * (max + std::log(sum));
  }
  return total;
}

// <gradient, policy> with the gradient rows already carrying the prior, so
// this equals the player's expected utility against the opponent average.
double linear_utility(const Matrix& gradient, const Matrix& policy) {
  double sum = 0.0;
  for (std::size_t i = 0; i < gradient.data().size(); ++i) {
    sum += gradient.data()[i] * policy.data()[i];
  }
  return sum;
}

// Shared trace instrumentation for both dynamics variants. `lambda_*` are
// the regularization weights in game units (the uniform special case maps
// its rescaled parameters back before calling this). Instantaneous regret
// is the shortfall of the step's iterate, against the opponent's running
// average, from the best response under the regularized utility the
// dynamics optimize; it is nonnegative by construction.
IterationStats measure_step(const Game& game, const Matrix& speaker_iterate,
                            const Matrix& listener_iterate,
                            const Matrix& speaker_avg,
                            const Matrix& listener_avg,
                            const Matrix& log_tau_speaker,
                            const Matrix& log_tau_listener,
                            double lambda_speaker, double lambda_listener,
                            const IterationStats* previous) {
  IterationStats stats;
  PolicyPair averages(speaker_avg, listener_avg);
  stats.utility_speaker = expected_utility(game, averages, Side::kSpeaker);
  stats.utility_listener = expected_utility(game, averages, Side::kListener);
  stats.kl_speaker = kl_to_anchor(game, averages, Side::kSpeaker);
  stats.kl_listener = kl_to_anchor(game, averages, Side::kListener);

  const Matrix grad_speaker = speaker_gradient(game, listener_avg);
  double realized_speaker =
      linear_utility(grad_speaker, speaker_iterate) -
      lambda_speaker * row_sum_kl(speaker_iterate, game.tau_speaker());
  stats.regret_speaker =
      best_response_value(grad_speaker, log_tau_speaker, lambda_speaker) -
      realized_speaker;

  const Matrix grad_listener = listener_gradient(game, speaker_avg);
  double realized_listener =
      linear_utility(grad_listener, listener_iterate) -
      lambda_listener * row_sum_kl(listener_iterate, game.tau_listener());
  stats.regret_listener =
      best_response_value(grad_listener, log_tau_listener, lambda_listener) -
      realized_listener;

  stats.cum_regret_speaker =
      (previous ? previous->cum_regret_speaker : 0.0) + stats.regret_speaker;
  stats.cum_regret_listener =
      (previous ? previous->cum_regret_listener : 0.0) + stats.regret_listener;
  return stats;
}

enum class Dynamics { kFull, kUniformSpecialCase };

// The two variants share everything except the exponent: the full dynamics
// use the utility gradients, the special case uses the transposed opponent
// average directly with the |M| factor absorbed into lambda_hat, eta_hat.
RecoResult run_dynamics(const Game& game, const RecoConfig& config,
                        Dynamics variant) {
  validate(config);
  const Matrix log_tau_speaker = log_of(game.tau_speaker());
  const Matrix log_tau_listener = log_of(game.tau_listener());

  // Regularization weights in game units, for the trace.
  const double meanings = static_cast<double>(game.num_meanings());
  const double trace_lambda_speaker =
      variant == Dynamics::kFull ? config.lambda_speaker
                                 : config.lambda_speaker / meanings;
  const double trace_lambda_listener =
      variant == Dynamics::kFull ? config.lambda_listener
                                 : config.lambda_listener / meanings;

  // The update denominator 1/(eta t) is infinite at t = 0, so the first
  // iterates are defined as the anchors and the update rule starts at t = 1.
  Matrix speaker_avg = game.tau_speaker();
  Matrix listener_avg = game.tau_listener();
  Matrix speaker_iterate = speaker_avg;
  Matrix listener_iterate = listener_avg;

  SolveTrace trace;
  trace.steps.reserve(static_cast<std::size_t>(config.iterations));
  trace.steps.push_back(measure_step(
      game, speaker_iterate, listener_iterate, speaker_avg, listener_avg,
      log_tau_speaker, log_tau_listener, trace_lambda_speaker,
      trace_lambda_listener, nullptr));

  for (int t = 1; t < config.iterations; ++t) {
    const double denom_speaker =
        1.0 / (config.eta_speaker * t) + config.lambda_speaker;
    const double denom_listener =
        1.0 / (config.eta_listener * t) + config.lambda_listener;

    Matrix speaker_next, listener_next;
    if (variant == Dynamics::kFull) {
      speaker_next =
          exponentiated_step(speaker_gradient(game, listener_avg),
                             log_tau_speaker, config.lambda_speaker,
                             denom_speaker, t);
      listener_next =
          exponentiated_step(listener_gradient(game, speaker_avg),
                             log_tau_listener, config.lambda_listener,
                             denom_listener, t);
    } else {
      speaker_next = exponentiated_step(listener_avg.transposed(),
                                        log_tau_speaker,
                                        config.lambda_speaker,
                                        denom_speaker, t);
      listener_next = exponentiated_step(speaker_avg.transposed(),
                                         log_tau_listener,
                                         config.lambda_listener,
                                         denom_listener, t);
    }

    fold_average(speaker_avg, speaker_next, t);
    fold_average(listener_avg, listener_next, t);
    speaker_iterate = std::move(speaker_next);
    listener_iterate = std::move(listener_next);

    trace.steps.push_back(measure_step(
        game, speaker_iterate, listener_iterate, speaker_avg, listener_avg,
        log_tau_speaker, log_tau_listener, trace_lambda_speaker,
        trace_lambda_listener, &trace.steps.back()));
  }

  return RecoResult{PolicyPair(std::move(speaker_avg), std::move(listener_avg)),
                    std::move(trace)};
}

// Hardens each row to the uniform distribution over its argmax set.
Matrix harden_rows(const Matrix& m) {
  Matrix out(m.rows(), m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double best = -std::numeric_limits<double>::infinity();
    for (double v : m.row(r)) best = std::max(best, v);
    std::size_t ties = 0;
    for (double v : m.row(r)) {
      if (v == best) ++ties;
    }
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c) == best) out(r, c) = 1.0 / static_cast<double>(ties);
    }
  }
  return out;
}

// Listener best response per the iterated-best-response equations:
// L(m'|u) = 1[m' = argmax_m S(u|m)], ties uniform.
Matrix ibr_listener_response(const Matrix& speaker) {
  return harden_rows(speaker.transposed());
}

// Speaker best response: S(u|m) = 1[u = argmax_u' L(m|u')], ties uniform.
Matrix ibr_speaker_response(const Matrix& listener) {
  return harden_rows(listener.transposed());
}

}  // namespace

Matrix speaker_gradient(const Game& game, const Matrix& listener_avg) {
  if (listener_avg.rows() != game.num_utterances() ||
      listener_avg.cols() != game.num_meanings()) {
    throw ShapeError("speaker_gradient: listener matrix must be |U| x |M|");
  }
  Matrix grad(game.num_meanings(), game.num_utterances());
  for (std::size_t m = 0; m < game.num_meanings(); ++m) {
    for (std::size_t u = 0; u < game.num_utterances(); ++u) {
      grad(m, u) =
          game.prior()[m] * (listener_avg(u, m) - game.costs()[u]);
    }
  }
  return grad;
}

Matrix listener_gradient(const Game& game, const Matrix& speaker_avg) {
  if (speaker_avg.rows() != game.num_meanings() ||
      speaker_avg.cols() != game.num_utterances()) {
    throw ShapeError("listener_gradient: speaker matrix must be |M| x |U|");
  }
  Matrix grad(game.num_utterances(), game.num_meanings());
  for (std::size_t u = 0; u < game.num_utterances(); ++u) {
    for (std::size_t m = 0; m < game.num_meanings(); ++m) {
      grad(u, m) = speaker_avg(m, u) * game.prior()[m];
    }
  }
  return grad;
}

RecoResult reco_solve(const Game& game, const RecoConfig& config) {
  return run_dynamics(game, config, Dynamics::kFull);
}

RecoResult reco_solve_uniform(const Game& game, const RecoConfig& config) {
  const double uniform = 1.0 / static_cast<double>(game.num_meanings());
  for (double p : game.prior()) {
    if (std::fabs(p - uniform) > kNormalizationTol) {
      throw PreconditionError(
          "reco_solve_uniform requires a uniform prior");
    }
  }
  for (double c : game.costs()) {
    if (c != 0.0) {
      throw PreconditionError("reco_solve_uniform requires zero costs");
    }
  }
  return run_dynamics(game, config, Dynamics::kUniformSpecialCase);
}

PolicyPair rsa_solve(const Game& game, const RsaConfig& config) {
  if (!(config.alpha > 0.0)) {
    throw PreconditionError("rsa config: alpha must be positive");
  }
  if (config.depth < 0) {
    throw PreconditionError("rsa config: depth must be >= 0");
  }

  const std::size_t num_m = game.num_meanings();
  const std::size_t num_u = game.num_utterances();

  // L(m|u) prop S(u|m) p(m)
  auto listener_rule = [&](const Matrix& speaker) {
    Matrix listener(num_u, num_m);
    for (std::size_t u = 0; u < num_u; ++u) {
      double sum = 0.0;
      for (std::size_t m = 0; m < num_m; ++m) {
        listener(u, m) = speaker(m, u) * game.prior()[m];
        sum += listener(u, m);
      }
      if (sum <= 0.0) {
        throw DegenerateRowError("rsa listener row for utterance '" +
                                 game.utterances()[u] + "' has empty support");
      }
      for (std::size_t m = 0; m < num_m; ++m) listener(u, m) /= sum;
    }
    return listener;
  };

  // S(u|m) prop exp{alpha (log L(m|u) - c(u))}
  auto speaker_rule = [&](const Matrix& listener) {
    Matrix logits(num_m, num_u);
    for (std::size_t m = 0; m < num_m; ++m) {
      bool any_support = false;
      for (std::size_t u = 0; u < num_u; ++u) {
        logits(m, u) =
            config.alpha * (std::log(listener(u, m)) - game.costs()[u]);
        if (listener(u, m) > 0.0) any_support = true;
      }
      if (!any_support) {
        throw DegenerateRowError("rsa speaker row for meaning '" +
                                 game.meanings()[m] + "' has empty support");
      }
    }
    row_softmax(logits);
    return logits;
  };

  if (config.start == Side::kListener) {
    Matrix listener = literal_listener(game);
    Matrix speaker = game.tau_speaker();  // literal fallback at depth 0
    for (int d = 0; d < config.depth; ++d) {
      speaker = speaker_rule(listener);
      listener = listener_rule(speaker);
    }
    return PolicyPair(std::move(speaker), std::move(listener));
  }

  Matrix speaker = game.tau_speaker();
  Matrix listener = literal_listener(game);  // literal fallback at depth 0
  for (int d = 0; d < config.depth; ++d) {
    listener = listener_rule(speaker);
    speaker = speaker_rule(listener);
  }
  return PolicyPair(std::move(speaker), std::move(listener));
}

PolicyPair ibr_solve(const Game& game, int depth, Side start) {
  if (depth < 0) {
    throw PreconditionError("ibr: depth must be >= 0");
  }
  Matrix speaker = harden_rows(game.tau_speaker());
  Matrix listener = harden_rows(game.tau_listener());
  Side mover = start;
  for (int level = 1; level <= depth; ++level) {
    mover = mover == Side::kSpeaker ? Side::kListener : Side::kSpeaker;
    if (mover == Side::kListener) {
      listener = ibr_listener_response(speaker);
    } else {
      speaker = ibr_speaker_response(listener);
    }
  }
  return PolicyPair(std::move(speaker), std::move(listener));
}

Matrix literal_listener_from(const Matrix& tau_listener,
                             const std::vector<double>& prior,
                             const std::vector<std::string>& utterances) {
  Matrix listener(tau_listener.rows(), tau_listener.cols());
  for (std::size_t u = 0; u < tau_listener.rows(); ++u) {
    double sum = 0.0;
    for (std::size_t m = 0; m < tau_listener.cols(); ++m) {
      listener(u, m) = tau_listener(u, m) * prior[m];
      sum += listener(u, m);
    }
    if (sum <= 0.0) {
      throw DegenerateRowError("literal listener row for utterance '" +
                               utterances[u] + "' has empty support");
    }
    for (std::size_t m = 0; m < tau_listener.cols(); ++m) {
      listener(u, m) /= sum;
    }
  }
  return listener;
}

Matrix literal_listener(const Game& game) {
  return literal_listener_from(game.tau_listener(), game.prior(),
                               game.utterances());
}

Matrix br_listener_to_literal_speaker(const Game& game) {
  Matrix scores(game.num_utterances(), game.num_meanings());
  for (std::size_t u = 0; u < game.num_utterances(); ++u) {
    for (std::size_t m = 0; m < game.num_meanings(); ++m) {
      scores(u, m) = game.tau_speaker()(m, u) * game.prior()[m];
    }
  }
  return harden_rows(scores);
}

}  // namespace reco
