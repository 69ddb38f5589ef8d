// rhythmkit/trainkit.hpp

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

#ifndef RHYTHMKIT_TRAINKIT_HPP_
#define RHYTHMKIT_TRAINKIT_HPP_

#include <string>
#include <vector>

#include "rhythmkit/resampler.hpp"
#include "rhythmkit/synthgen.hpp"
#include "rhythmkit/tinynet.hpp"

namespace rhythmkit {

/// Toy encoder/decoder pair around the resampler, small enough to train in
/// milliseconds yet structured like the full pipeline: a frame-wise
/// encoder, a decoder conditioned on a learned per-domain embedding, and a
/// per-code duration head that lets the decoder decide rhythm from the
/// domain id (the stand-in for a sequence decoder with a stop decision).
struct ToyModel {
  TinyNet encoder;               // d -> hidden -> code_dim
  TinyNet decoder;               // code_dim + embed -> hidden -> d
  TinyNet duration_head;         // code_dim + embed -> hidden -> 1
  Eigen::MatrixXd domain_table;  // n_domains x embed

  Eigen::Index feat_dim() const { return encoder.input_dim(); }
  Eigen::Index code_dim() const { return encoder.output_dim(); }
  Eigen::Index embed_dim() const { return domain_table.cols(); }
  Eigen::Index num_domains() const { return domain_table.rows(); }
};

enum class ResampleMode { kRandomized, kFixedTau, kOff };
enum class GramSource { kCodes, kFeatures };

struct ToyConfig {
  int code_dim = 4;
  int hidden = 16;
  int embed_dim = 2;
  double lr = 1e-3;
  int steps = 300;
  uint64_t seed = 0;
  ResampleMode resample_mode = ResampleMode::kRandomized;
  double fixed_tau = 0.5;
  ThresholdParams tau;  // used in randomized mode
  GramSource gram_source = GramSource::kCodes;
  double duration_loss_weight = 1.0;

  void validate() const;
};

struct ToyTrainResult {
  ToyModel model;
  /// One entry per step (loss before the update), plus a final evaluation.
  std::vector<double> loss_trace;
};

ToyModel init_toy_model(int feat_dim, int n_domains, const ToyConfig& cfg, Rng& rng);

/// Stage 1, synchronous: encode, resample, realign back to input length,
/// decode with the utterance's domain embedding, l2 reconstruction.
/// Gradients reach the encoder, decoder and domain table.  Utterances must
/// carry domain ids and at least two domains must be present.
ToyTrainResult train_sync(const std::vector<SyntheticUtterance>& data, const ToyConfig& cfg);

/// Stage 2, asynchronous: realignment removed, encoder frozen (bitwise).
/// The decoder consumes the variable-length codes directly; the duration
/// head regresses each code's true segment length (0 for inserted codes);
/// reconstruction compares each code against all frames of its segment.
ToyTrainResult train_async(const ToyModel& model, const std::vector<SyntheticUtterance>& data,
                           const ToyConfig& cfg);

/// Ablation: the asynchronous objective trained end to end from scratch,
/// encoder included, with no synchronous stage and no freeze.
ToyTrainResult train_single_stage(const std::vector<SyntheticUtterance>& data, const ToyConfig& cfg);

/// Encode, pass codes through at threshold 1 (identity resample), decode
/// with the target domain embedding, repeat each code by its predicted
/// duration (rounded, floored at one frame per code).
FrameSequence convert(const ToyModel& model, const FrameSequence& utt, int target_domain);

/// Model file: `toy_dims: d hidden code embed domains` plus labeled blocks.
void save_toy(const std::string& path, const ToyModel& model);
ToyModel load_toy(const std::string& path);

/// One full rhythm-conversion trial used by the CLI and the experiment
/// suites: build a two-domain corpus, train (two-stage or single-stage),
/// convert a held-out parallel pair both ways and report the lengths.
struct TwoStageExperimentConfig {
  int utts_per_domain = 8;
  int alphabet = 6;
  int min_phones = 4;
  int max_phones = 7;
  int base_reps = 3;
  int dim = 8;
  double duration_jitter = 0.1;
  RhythmStyle fast_style{1.0, 3.0, 0.0};  // short, vowels stretched
  RhythmStyle slow_style{2.5, 1.0, 0.0};  // long, uniform
  ToyConfig sync_cfg;
  ToyConfig async_cfg;
  bool single_stage = false;
};

struct TwoStageOutcome {
  int l_f2s = 0;
  int l_s2f = 0;
  double rdd = 0.0;
  std::vector<double> sync_trace;
  std::vector<double> async_trace;
  ToyModel model;
};

TwoStageOutcome run_two_stage_trial(uint64_t seed, const TwoStageExperimentConfig& cfg);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_TRAINKIT_HPP_
