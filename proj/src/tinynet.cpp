// rhythmkit/tinynet.cpp

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

#include "rhythmkit/tinynet.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "rhythmkit/csv.hpp"
#include "rhythmkit/errors.hpp"

namespace rhythmkit {

TinyNet TinyNet::make(const std::vector<int>& dims, const std::vector<Activation>& acts, Rng& rng) {
  if (dims.size() < 2) throw ConfigError("need at least one layer");
  if (acts.size() != dims.size() - 1) throw ConfigError("one activation per layer required");
  TinyNet net;
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    if (fan_in < 1 || fan_out < 1) throw ConfigError("layer dims must be positive");
    Layer layer;
    layer.weight.resize(fan_out, fan_in);
    const double scale = std::sqrt(6.0 / (fan_in + fan_out));
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) layer.weight(r, c) = rng.uniform(-scale, scale);
    }
    layer.bias = Eigen::VectorXd::Zero(fan_out);
    layer.act = acts[l];
    net.layers.push_back(std::move(layer));
  }
  return net;
}

TinyNet TinyNet::make_two_layer(int in, int hidden, int out, Rng& rng) {
  return make({in, hidden, out}, {Activation::kTanh, Activation::kIdentity}, rng);
}

namespace {

Eigen::MatrixXd apply_activation(const Eigen::MatrixXd& pre, Activation act) {
  if (act == Activation::kTanh) return pre.array().tanh().matrix();
  return pre;
}

}  // namespace

Eigen::MatrixXd forward(const TinyNet& net, const Eigen::MatrixXd& x) {
  if (x.cols() != net.input_dim()) throw DimMismatch("forward: input dim mismatch");
  Eigen::MatrixXd h = x;
  for (const auto& layer : net.layers) {
    h = ((h * layer.weight.transpose()).rowwise() + layer.bias.transpose()).eval();
    h = apply_activation(h, layer.act);
  }
  return h;
}

ForwardCache forward_cached(const TinyNet& net, const Eigen::MatrixXd& x) {
  if (x.cols() != net.input_dim()) throw DimMismatch("forward: input dim mismatch");
  ForwardCache cache;
  cache.post.push_back(x);
  for (const auto& layer : net.layers) {
    Eigen::MatrixXd pre = (cache.post.back() * layer.weight.transpose()).rowwise() + layer.bias.transpose();
    cache.post.push_back(apply_activation(pre, layer.act));
    cache.pre.push_back(std::move(pre));
  }
  return cache;
}

NetGrads NetGrads::zeros_like(const TinyNet& net) {
  NetGrads grads;
  for (const auto& layer : net.layers) {
    grads.d_weight.push_back(Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()));
    grads.d_bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  return grads;
}

void NetGrads::accumulate(const NetGrads& other) {
  for (size_t l = 0; l < d_weight.size(); ++l) {
    d_weight[l] += other.d_weight[l];
    d_bias[l] += other.d_bias[l];
  }
}

void NetGrads::scale(double factor) {
  for (size_t l = 0; l < d_weight.size(); ++l) {
    d_weight[l] *= factor;
    d_bias[l] *= factor;
  }
}

Eigen::MatrixXd backward(const TinyNet& net, const ForwardCache& cache,
                         const Eigen::MatrixXd& d_out, NetGrads* grads) {
  if (d_out.rows() != cache.post.back().rows() || d_out.cols() != cache.post.back().cols()) {
    throw DimMismatch("backward: upstream gradient shape mismatch");
  }
  Eigen::MatrixXd delta = d_out;
  for (int l = static_cast<int>(net.layers.size()) - 1; l >= 0; --l) {
    const auto& layer = net.layers[static_cast<size_t>(l)];
    if (layer.act == Activation::kTanh) {
      // d tanh(z) = 1 - tanh(z)^2, and post holds tanh(z).
      delta = delta.cwiseProduct(
          (1.0 - cache.post[static_cast<size_t>(l + 1)].array().square()).matrix());
    }
    if (grads != nullptr) {
      grads->d_weight[static_cast<size_t>(l)] += delta.transpose() * cache.post[static_cast<size_t>(l)];
      grads->d_bias[static_cast<size_t>(l)] += delta.colwise().sum().transpose();
    }
    delta = (delta * layer.weight).eval();
  }
  return delta;
}

void apply_step(TinyNet* net, const NetGrads& grads, double lr) {
  for (size_t l = 0; l < net->layers.size(); ++l) {
    net->layers[l].weight -= lr * grads.d_weight[l];
    net->layers[l].bias -= lr * grads.d_bias[l];
  }
}

Eigen::VectorXd get_parameters(const TinyNet& net) {
  Eigen::Index n = 0;
  for (const auto& layer : net.layers) n += layer.weight.size() + layer.bias.size();
  Eigen::VectorXd flat(n);
  Eigen::Index at = 0;
  for (const auto& layer : net.layers) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) flat(at++) = layer.weight(r, c);
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) flat(at++) = layer.bias(i);
  }
  return flat;
}

void set_parameters(TinyNet* net, const Eigen::VectorXd& flat) {
  Eigen::Index at = 0;
  for (auto& layer : net->layers) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = flat(at++);
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = flat(at++);
  }
  if (at != flat.size()) throw DimMismatch("set_parameters: size mismatch");
}

Eigen::VectorXd flatten_grads(const NetGrads& grads) {
  Eigen::Index n = 0;
  for (size_t l = 0; l < grads.d_weight.size(); ++l)
    n += grads.d_weight[l].size() + grads.d_bias[l].size();
  Eigen::VectorXd flat(n);
  Eigen::Index at = 0;
  for (size_t l = 0; l < grads.d_weight.size(); ++l) {
    const auto& w = grads.d_weight[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) flat(at++) = w(r, c);
    for (Eigen::Index i = 0; i < grads.d_bias[l].size(); ++i) flat(at++) = grads.d_bias[l](i);
  }
  return flat;
}

void write_matrix_block(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m) {
  out << "block " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << g17(m(r, c));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_block(std::istream& in, const std::string& expected_name) {
  std::string tag, name;
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> tag >> name >> rows >> cols) || tag != "block") {
    throw FormatError("expected block header for " + expected_name);
  }
  if (name != expected_name) throw FormatError("expected block " + expected_name + ", got " + name);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      if (!(in >> m(r, c))) throw FormatError("truncated block " + name);
  return m;
}

void write_net_blocks(std::ostream& out, const std::string& prefix, const TinyNet& net) {
  for (size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    const std::string base = prefix + ".layer" + std::to_string(l);
    write_matrix_block(out, base + ".weight", layer.weight);
    write_matrix_block(out, base + ".bias", layer.bias.transpose());
    out << "act " << base << ' ' << (layer.act == Activation::kTanh ? "tanh" : "identity") << '\n';
  }
}

TinyNet read_net_blocks(std::istream& in, const std::string& prefix, int n_layers) {
  TinyNet net;
  for (int l = 0; l < n_layers; ++l) {
    const std::string base = prefix + ".layer" + std::to_string(l);
    TinyNet::Layer layer;
    layer.weight = read_matrix_block(in, base + ".weight");
    layer.bias = read_matrix_block(in, base + ".bias").transpose();
    std::string tag, name, act;
    if (!(in >> tag >> name >> act) || tag != "act" || name != base) {
      throw FormatError("expected activation tag for " + base);
    }
    if (act == "tanh") {
      layer.act = Activation::kTanh;
    } else if (act == "identity") {
      layer.act = Activation::kIdentity;
    } else {
      throw FormatError("unknown activation " + act);
    }
    net.layers.push_back(std::move(layer));
  }
  return net;
}

}  // namespace rhythmkit
