// rhythmkit/synthgen.hpp

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

#ifndef RHYTHMKIT_SYNTHGEN_HPP_
#define RHYTHMKIT_SYNTHGEN_HPP_

#include <utility>
#include <vector>

#include "rhythmkit/feats.hpp"
#include "rhythmkit/rng.hpp"

namespace rhythmkit {

/// Duration style of a synthetic speaker.  `rate` scales every phone;
/// `vowel_stretch` additionally scales the designated vowel symbols (the
/// even ids), which makes duration changes disproportional across phones.
struct RhythmStyle {
  double rate = 1.0;
  double vowel_stretch = 1.0;
  double noise_sd = 0.0;

  void validate() const;
};

/// A rendered utterance with its ground truth: the phone symbols, the
/// per-phone frame repetition counts, and the frame sequence itself
/// (num_frames == sum of reps).
struct SyntheticUtterance {
  std::vector<int> phones;
  std::vector<int> reps;
  FrameSequence seq;
  RhythmStyle style;

  int total_frames() const;
  /// For each frame, the index into `phones` it belongs to.
  std::vector<int> frame_phone_index() const;
};

/// Even symbol ids act as vowels.
inline bool is_vowel(int phone_id) { return phone_id % 2 == 0; }

/// Uniform random symbol vector without consecutive repeats; length drawn
/// uniformly from [min_len, max_len].  Forbidding repeats keeps phone
/// boundaries well defined in the ground truth.
std::vector<int> sample_phones(Rng& rng, int alphabet_size, int min_len, int max_len);

/// Per-phone repetition counts: max(1, round(base_reps * rate * u)) with
/// u ~ U[1 - duration_jitter, 1 + duration_jitter], times vowel_stretch on
/// vowel symbols.  duration_jitter = 0 removes the jitter (tests).
std::vector<int> sample_rhythm(Rng& rng, const std::vector<int>& phones,
                               const RhythmStyle& style, int base_reps,
                               double duration_jitter = 0.25);

/// Fixed unit-norm prototype vector for a symbol id; a deterministic
/// function of (phone_id, dim) so prototypes are shared across utterances.
Eigen::VectorXd phone_prototype(int phone_id, int dim);

/// Expands phones/reps into frames: each frame is its phone's prototype
/// plus independent N(0, noise_sd^2) per entry.
FrameSequence render(const std::vector<int>& phones, const std::vector<int>& reps,
                     int dim, double noise_sd, Rng& rng);

/// Two utterances sharing the exact phone vector (and prototypes), with
/// repetitions drawn independently per style and independent noise.
std::pair<SyntheticUtterance, SyntheticUtterance> parallel_pair(
    Rng& rng, const std::vector<int>& phones, const RhythmStyle& style_a,
    const RhythmStyle& style_b, int base_reps, int dim,
    double duration_jitter = 0.25);

/// Convenience: sample phones, rhythm and rendering in one call.
SyntheticUtterance make_utterance(Rng& rng, int alphabet_size, int min_len, int max_len,
                                  const RhythmStyle& style, int base_reps, int dim,
                                  double duration_jitter = 0.25);

/// Utterance dump: `phone_id,rep` rows.
void write_utterance_csv(const std::string& path, const SyntheticUtterance& utt);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_SYNTHGEN_HPP_
