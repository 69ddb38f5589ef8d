// rhythmkit/simrep.hpp

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

#ifndef RHYTHMKIT_SIMREP_HPP_
#define RHYTHMKIT_SIMREP_HPP_

#include <string>
#include <vector>

#include "rhythmkit/feats.hpp"
#include "rhythmkit/tinynet.hpp"

namespace rhythmkit {

/// Pairwise cosine similarities between frames.  Symmetric, diagonal
/// exactly 1, entries in [-1, 1].
struct GramMatrix {
  Eigen::MatrixXd g;

  Eigen::Index size() const { return g.rows(); }
};

/// Cosine Gram matrix of a frame sequence.  Frames with norm below 1e-12
/// get similarity 0 to everything and 1 to themselves.  Bitwise-identical
/// frames get similarity exactly 1.0, so noise-free repeated frames form
/// exact constant blocks.
GramMatrix gram(const FrameSequence& seq);
GramMatrix gram_rows(const Eigen::MatrixXd& rows);

/// Context representation: B(t) = sum over t' != t of cos(A(t'), A(t)) * A(t').
/// The weights are raw cosines; the sum is not normalized.
FrameSequence self_express(const FrameSequence& a_seq);

/// Self-expressive autoencoder: one encoder producing the similarity
/// representation A(t), one decoder reconstructing from A(t) directly, and
/// one reconstructing from the context representation B(t).
struct SeaModel {
  TinyNet encoder;          // d -> hidden -> code_dim
  TinyNet decoder_direct;   // code_dim -> hidden -> d
  TinyNet decoder_context;  // code_dim -> hidden -> d

  Eigen::Index input_dim() const { return encoder.input_dim(); }
  Eigen::Index code_dim() const { return encoder.output_dim(); }
};

struct SeaConfig {
  int hidden = 16;
  int code_dim = 8;
  double lr = 1e-3;
  int epochs = 100;
  uint64_t seed = 0;

  void validate() const;
};

struct SeaGrads {
  NetGrads encoder;
  NetGrads decoder_direct;
  NetGrads decoder_context;
};

/// Total reconstruction loss over the dataset:
///   sum_t |dec_direct(A(t)) - x(t)|^2 + |dec_context(B(t)) - x(t)|^2,
/// with B computed per utterance and gradients flowing through the cosine
/// weights.  Gradients are accumulated into *grads when non-null.
double sea_loss_and_gradients(const SeaModel& model, const std::vector<FrameSequence>& data,
                              SeaGrads* grads);

struct SeaTrainResult {
  SeaModel model;
  /// loss_trace[e] is the loss before step e; the last entry is the final loss.
  std::vector<double> loss_trace;
};

/// Full-batch gradient descent on the joint reconstruction loss.
SeaTrainResult train_sea(const std::vector<FrameSequence>& data, const SeaConfig& cfg);

/// Frame-wise encoder application: A(t) = encoder(x(t)).
FrameSequence embed(const SeaModel& model, const FrameSequence& seq);

/// Plain-text model file: `dims: d h a` header, then labeled weight blocks
/// at 17 significant digits.
void save_sea(const std::string& path, const SeaModel& model);
SeaModel load_sea(const std::string& path);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_SIMREP_HPP_
