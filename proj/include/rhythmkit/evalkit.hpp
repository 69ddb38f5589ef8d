// rhythmkit/evalkit.hpp

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

#ifndef RHYTHMKIT_EVALKIT_HPP_
#define RHYTHMKIT_EVALKIT_HPP_

#include <functional>
#include <utility>
#include <vector>

#include "rhythmkit/resampler.hpp"
#include "rhythmkit/synthgen.hpp"

namespace rhythmkit {

/// Lengths of the two cross-domain conversions of one parallel pair.
struct DurationRecord {
  int pair_id = 0;
  int l_f2s = 0;
  int l_s2f = 0;
  double rdd = 0.0;
};

/// (L_f2s - L_s2f) / L_s2f.  Positive values mean the conversion moved the
/// duration toward the target domain's style.
double relative_duration_difference(int l_f2s, int l_s2f);

struct AlignmentEstimate {
  int trials = 0;
  int successes = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

/// Wilson 95% score interval; well-behaved at p_hat near 0 and 1.
AlignmentEstimate wilson_estimate(int successes, int trials);

using PairGenerator = std::function<std::pair<FrameSequence, FrameSequence>(Rng&)>;
using ResamplerFn = std::function<Eigen::MatrixXd(const FrameSequence&, Rng&)>;

/// Estimates the probability that resampling aligns same-content pairs:
/// per trial, generate a pair, resample both sides, and count success when
/// the outputs have equal length and max-norm row difference <= tol.
/// Trials use independent generators derived from `seed`.
AlignmentEstimate alignment_probability(const PairGenerator& pair_gen, const ResamplerFn& resampler,
                                        int trials, double tol, uint64_t seed);

/// Content correspondence of two segmentations of parallel utterances.
/// Each non-empty segment is labeled by the majority ground-truth phone of
/// its frames (ties to the lower phone id); the score combines segment
/// count equality with the longest-common-subsequence overlap of the two
/// label sequences:
///   0.5 * [count_a == count_b] + 0.5 * LCS / max(len_a, len_b).
double boundary_correspondence(const SyntheticUtterance& utt_a, const Segmentation& seg_a,
                               const SyntheticUtterance& utt_b, const Segmentation& seg_b);

struct SweepRow {
  double tau = 0.0;
  int out_len = 0;
};

/// Code count after a fixed-threshold resample, for each tau in the grid;
/// rows are sorted by tau.
std::vector<SweepRow> length_vs_tau_sweep(const FrameSequence& utt, const GramMatrix& gram,
                                          std::vector<double> tau_values,
                                          UpsampleRule rule = UpsampleRule::kHighSimilarity);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_EVALKIT_HPP_
