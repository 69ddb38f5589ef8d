// rhythmkit/feats.hpp

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

#ifndef RHYTHMKIT_FEATS_HPP_
#define RHYTHMKIT_FEATS_HPP_

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "rhythmkit/wav.hpp"

namespace rhythmkit {

/// Frame-level feature sequence: one row per frame.  Everything downstream
/// (similarity, resampling, training) operates on this type.
struct FrameSequence {
  Eigen::MatrixXd frames;      // T x d
  double frame_period = 0.01;  // seconds per frame
  std::string source_id;
  std::optional<int> domain_id;

  Eigen::Index num_frames() const { return frames.rows(); }
  Eigen::Index dim() const { return frames.cols(); }
};

/// Framing and filterbank configuration.  The constants are conventional:
/// 25 ms frames, 10 ms hop, pre-emphasis 0.97, Hann window, log energies
/// floored at 1e-10, DCT-II (orthonormal) cepstra.
struct FeatConfig {
  double frame_len_s = 0.025;
  double hop_s = 0.010;
  int n_mels = 26;
  int n_coeffs = 13;

  void validate() const;
};

/// Mel-frequency cepstral coefficients, d = n_coeffs.
/// Pipeline: pre-emphasis -> Hann -> magnitude FFT -> mel filterbank ->
/// log (floored at 1e-10) -> DCT-II, keeping the first n_coeffs.
FrameSequence mfcc(const AudioSignal& audio, const FeatConfig& cfg = {});

/// Log mel energies without the cepstral transform, d = n_mels.
/// Values are log(mel energy + 1e-10).
FrameSequence log_mel_spectrogram(const AudioSignal& audio, const FeatConfig& cfg = {});

/// Per-dimension z-score over the utterance (population standard
/// deviation).  Dimensions with sd below 1e-8 are mean-subtracted only.
FrameSequence normalize(const FrameSequence& seq);

/// Feature CSV with header `t,c0,...,c{d-1}`, 9 significant digits.
void write_features_csv(const std::string& path, const FrameSequence& seq);
FrameSequence read_features_csv(const std::string& path);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_FEATS_HPP_
