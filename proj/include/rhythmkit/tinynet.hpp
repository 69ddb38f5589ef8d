// rhythmkit/tinynet.hpp

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

#ifndef RHYTHMKIT_TINYNET_HPP_
#define RHYTHMKIT_TINYNET_HPP_

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "rhythmkit/rng.hpp"

namespace rhythmkit {

enum class Activation { kTanh, kIdentity };

/// Small feedforward network applied row-wise to batches.  This is the
/// shared workhorse for the self-expressive encoder/decoders and the toy
/// autoencoder; training is plain gradient descent, exact reverse mode.
struct TinyNet {
  struct Layer {
    Eigen::MatrixXd weight;  // out x in
    Eigen::VectorXd bias;    // out
    Activation act = Activation::kIdentity;
  };

  std::vector<Layer> layers;

  Eigen::Index input_dim() const { return layers.front().weight.cols(); }
  Eigen::Index output_dim() const { return layers.back().weight.rows(); }

  /// Uniform(-s, s) init with s = sqrt(6 / (fan_in + fan_out)), zero bias.
  static TinyNet make(const std::vector<int>& dims, const std::vector<Activation>& acts, Rng& rng);

  /// Two-layer tanh/identity net, the default shape used everywhere.
  static TinyNet make_two_layer(int in, int hidden, int out, Rng& rng);
};

/// Row-wise forward pass: x is N x in, result N x out.
Eigen::MatrixXd forward(const TinyNet& net, const Eigen::MatrixXd& x);

/// Activations retained for the backward pass.  post[0] is the input,
/// post[k] the output of layer k-1; pre[k] the pre-activation of layer k.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> pre;
  std::vector<Eigen::MatrixXd> post;
  const Eigen::MatrixXd& output() const { return post.back(); }
};

ForwardCache forward_cached(const TinyNet& net, const Eigen::MatrixXd& x);

/// Parameter gradients, same shapes as the network.
struct NetGrads {
  std::vector<Eigen::MatrixXd> d_weight;
  std::vector<Eigen::VectorXd> d_bias;

  static NetGrads zeros_like(const TinyNet& net);
  void accumulate(const NetGrads& other);
  void scale(double factor);
};

/// Exact reverse mode.  d_out is N x out; parameter gradients are added
/// into *grads (may be null); returns d_input (N x in).
Eigen::MatrixXd backward(const TinyNet& net, const ForwardCache& cache,
                         const Eigen::MatrixXd& d_out, NetGrads* grads);

/// In-place gradient-descent step: p -= lr * g.
void apply_step(TinyNet* net, const NetGrads& grads, double lr);

/// Flat parameter access, used by the finite-difference checks.
Eigen::VectorXd get_parameters(const TinyNet& net);
void set_parameters(TinyNet* net, const Eigen::VectorXd& flat);
Eigen::VectorXd flatten_grads(const NetGrads& grads);

/// Plain-text serialization: one `block <name> <rows> <cols>` header per
/// matrix, row-major values at 17 significant digits.
void write_net_blocks(std::ostream& out, const std::string& prefix, const TinyNet& net);
TinyNet read_net_blocks(std::istream& in, const std::string& prefix, int n_layers);
void write_matrix_block(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_block(std::istream& in, const std::string& expected_name);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_TINYNET_HPP_
