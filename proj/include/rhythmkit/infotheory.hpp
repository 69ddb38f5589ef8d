// rhythmkit/infotheory.hpp

// Copyright 2026  rhythmkit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef RHYTHMKIT_INFOTHEORY_HPP_
#define RHYTHMKIT_INFOTHEORY_HPP_

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "rhythmkit/feats.hpp"
#include "rhythmkit/rng.hpp"

namespace rhythmkit {

/// Exact information-theoretic verification of the resampling channel on
/// small discrete ensembles: content S, rhythm R, the rendered symbol
/// sequence X = emit(S, R), and the (possibly stochastic) channel output Z.
/// Everything is enumerated exactly; entropies are in bits.

using Seq = std::vector<int>;

std::string seq_key(const Seq& seq);

/// Finite distribution over labeled outcomes.
struct DiscretePmf {
  std::vector<std::string> support;
  std::vector<double> probs;

  void validate() const;  // probs >= 0, sum 1 within 1e-12
};

/// Shannon entropy in bits, 0 log 0 = 0.
double entropy(const std::vector<double>& probs);
double entropy(const DiscretePmf& pmf);

/// Joint distribution over pairs (row outcome, column outcome).
struct JointPmf {
  std::vector<std::string> row_support;
  std::vector<std::string> col_support;
  Eigen::MatrixXd p;

  DiscretePmf row_marginal() const;
  DiscretePmf col_marginal() const;
  void validate() const;
};

/// I = H(rows) + H(cols) - H(joint), clamped to 0 if within -1e-10 of it;
/// anything more negative raises NumericalError.
double mutual_information(const JointPmf& joint);

/// Channel output distribution for one input sequence.
struct OutcomeDist {
  std::vector<Seq> outcomes;
  std::vector<double> probs;
};

using Channel = std::function<OutcomeDist(const Seq&)>;
using EmitFn = std::function<Seq(const Seq& s, const Seq& r)>;

/// X = each symbol of S repeated its count in R.
Seq repeat_expand(const Seq& s, const Seq& r);
/// Collapses runs of equal symbols to single symbols (inverse of the
/// rhythm component: collapse(emit(s, r)) == s when s has no repeats).
Seq collapse_runs(const Seq& x);

struct DiscreteEnsemble {
  struct Entry {
    Seq s;
    Seq r;
    double prob = 0.0;
  };

  std::vector<Entry> joint_sr;
  EmitFn emit = repeat_expand;
  Channel channel;

  /// Checks the probability sum and that emit is injective on the support
  /// (distinct (S, R) map to distinct X, so S and R are recoverable from X).
  void validate() const;
};

/// Exact marginalizations.
JointPmf joint_r_z(const DiscreteEnsemble& ens);  // channel pushforward
JointPmf joint_r_x(const DiscreteEnsemble& ens);
JointPmf joint_r_s(const DiscreteEnsemble& ens);
JointPmf joint_s_z(const DiscreteEnsemble& ens);
JointPmf joint_s_x(const DiscreteEnsemble& ens);

inline JointPmf push_channel(const DiscreteEnsemble& ens) { return joint_r_z(ens); }

struct TheoremReport {
  double lhs = 0.0;  // I(R; Z)
  double rhs = 0.0;
  bool pass = false;
};

/// Hypothesis: same-S different-R inputs never collide at the channel
/// output (checked exhaustively), and the channel preserves content
/// information: I(S; Z) = I(S; X).  Conclusion checked: I(R; Z) = I(R; X)
/// within 1e-9.  Throws HypothesisViolated naming the offending pair.
TheoremReport verify_theorem1(const DiscreteEnsemble& ens);

/// Hypothesis: the channel output is one constant per S (deterministic and
/// shared across all rhythms of that S), and I(S; Z) = I(S; X).
/// Conclusion checked: I(R; Z) = I(R; S) within 1e-9.
TheoremReport verify_theorem2(const DiscreteEnsemble& ens);

/// Randomized ensemble families for the verification suites.
/// Splitting channel: every X gets its own disjoint set of output tokens,
/// so distinct inputs never collide (theorem-1 hypothesis holds).
DiscreteEnsemble random_split_ensemble(Rng& rng);
/// Run-collapsing channel: Z = collapse_runs(X) = S (theorem-2 hypothesis).
DiscreteEnsemble random_collapse_ensemble(Rng& rng);
/// Arbitrary stochastic channel into a small shared token pool; used for
/// data-processing-inequality checks.
DiscreteEnsemble random_noisy_ensemble(Rng& rng);

/// Monte Carlo estimate of an actual resampler as a discrete channel.
/// Each input symbol becomes one prototype frame; the resampled codes are
/// quantized back to the nearest prototype (by cosine, ties to the lowest
/// id).
struct EmpiricalChannelConfig {
  int dim = 16;
  int alphabet = 0;  // 0: inferred from the inputs
  int samples_per_input = 1000;
  uint64_t seed = 0;
  std::function<Eigen::MatrixXd(const FrameSequence&, Rng&)> resampler;
};

struct EmpiricalChannel {
  std::vector<Seq> inputs;
  std::vector<std::vector<std::pair<Seq, int>>> counts;  // outcome, count
  int samples_per_input = 0;

  /// Lookup channel over the estimated rows; unknown inputs throw.
  Channel as_channel() const;
};

EmpiricalChannel estimate_channel(const std::vector<Seq>& inputs,
                                  const EmpiricalChannelConfig& cfg);

Seq quantize_to_prototypes(const Eigen::MatrixXd& codes, int alphabet, int dim);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_INFOTHEORY_HPP_
