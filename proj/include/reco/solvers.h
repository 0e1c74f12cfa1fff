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
// Policy computation: regularized-equilibrium search via piKL-Hedge
// ("reco"), its uniform-prior/zero-cost special case, RSA, iterated best
// response, and the literal/best-response baselines. All solvers are
// deterministic and RNG-free.

#ifndef RECO_SOLVERS_H_
#define RECO_SOLVERS_H_

#include <cstddef>
#include <vector>

#include "reco/game.h"
#include "reco/matrix.h"

namespace reco {

struct RecoConfig {
  double lambda_speaker = 0.1;
  double lambda_listener = 0.1;
  double eta_speaker = 1.0;
  double eta_listener = 1.0;
  int iterations = 1000;
};

struct RsaConfig {
  double alpha = 1.0;
  int depth = 1;
  Side start = Side::kListener;
};

// Per-iteration diagnostics. Utilities and KL are measured on the running
// average policies; regret is measured on the step's iterate against the
// opponent's running average (see solvers.cc for the exact definition).
struct IterationStats {
  double utility_speaker = 0.0;
  double utility_listener = 0.0;
  double kl_speaker = 0.0;
  double kl_listener = 0.0;
  double regret_speaker = 0.0;       // instantaneous
  double regret_listener = 0.0;      // instantaneous
  double cum_regret_speaker = 0.0;
  double cum_regret_listener = 0.0;
};

struct SolveTrace {
  std::vector<IterationStats> steps;  // one record per iteration
};

struct RecoResult {
  // Running averages after the final step; these are the policies used
  // for prediction, not the last iterates.
  PolicyPair averages;
  SolveTrace trace;
};

// Gradient of the speaker's expected utility in the matrix policy:
// -p c^T + diag(p) L^T, shape |M| x |U|. `listener_avg` is |U| x |M|.
Matrix speaker_gradient(const Game& game, const Matrix& listener_avg);

// Gradient of the listener's expected utility: S^T diag(p), shape
// |U| x |M|. `speaker_avg` is |M| x |U|.
Matrix listener_gradient(const Game& game, const Matrix& speaker_avg);

// Runs `config.iterations` steps of piKL-Hedge on the regularized
// utilities. The first iterates are the anchors tau_S, tau_L; step t >= 1
// then forms, per side,
//   next  row-prop  exp{ (gradient(opponent avg) + lambda log tau)
//                        / (1/(eta t) + lambda) }
// and folds it into the running average with the t/(t+1) rule.
RecoResult reco_solve(const Game& game, const RecoConfig& config);

// Simplified dynamics for uniform-prior zero-cost games. `config` carries
// the rescaled parameters: lambda_hat = |M| lambda and eta_hat = eta / |M|.
// Agrees with reco_solve under that parameter mapping. Throws
// PreconditionError when the game has a non-uniform prior or nonzero costs.
RecoResult reco_solve_uniform(const Game& game, const RecoConfig& config);

// Rational Speech Acts. With start = listener the base level is
// L(m|u) prop tau_L(m|u) p(m); each of `depth` rounds then applies the
// speaker rule S(u|m) prop exp{alpha (log L(m|u) - c(u))} followed by the
// listener rule L(m|u) prop S(u|m) p(m). Symmetric when start = speaker
// (base S prop tau_S, rounds apply listener rule then speaker rule). At
// depth 0 the side that never moved defaults to its literal policy.
PolicyPair rsa_solve(const Game& game, const RsaConfig& config);

// Iterated best response. `depth` counts individual best-response levels:
// level 0 hardens the starting side's anchor rows to their argmax (ties
// uniform); each further level is an argmax response to the previous one.
// The side that never moved is completed with its hardened anchor.
PolicyPair ibr_solve(const Game& game, int depth, Side start);

// L(m|u) prop tau_L(m|u) p(m), row-normalized. |U| x |M|.
Matrix literal_listener(const Game& game);

// For each utterance, the uniform distribution over
// argmax_m tau_S(u|m) p(m): a listener best-responding to the literal
// speaker. |U| x |M|.
Matrix br_listener_to_literal_speaker(const Game& game);

// Exposed for tests: literal listener computed from raw matrices.
Matrix literal_listener_from(const Matrix& tau_listener,
                             const std::vector<double>& prior,
                             const std::vector<std::string>& utterances);

}  // namespace reco

#endif  // RECO_SOLVERS_H_
