// rhythmkit/simrep.cpp

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

#include "rhythmkit/simrep.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "rhythmkit/errors.hpp"

namespace rhythmkit {

namespace {

constexpr double kNormEps = 1e-12;

bool rows_bitwise_equal(const Eigen::MatrixXd& rows, Eigen::Index a, Eigen::Index b) {
  for (Eigen::Index c = 0; c < rows.cols(); ++c) {
    if (std::memcmp(&rows(a, c), &rows(b, c), sizeof(double)) != 0) return false;
  }
  return true;
}

}  // namespace

GramMatrix gram_rows(const Eigen::MatrixXd& rows) {
  const Eigen::Index t_len = rows.rows();
  if (t_len < 1) throw EmptyInput("gram needs at least one frame");

  Eigen::VectorXd norms(t_len);
  for (Eigen::Index t = 0; t < t_len; ++t) norms(t) = rows.row(t).norm();

  GramMatrix gm;
  gm.g.resize(t_len, t_len);
  for (Eigen::Index a = 0; a < t_len; ++a) {
    gm.g(a, a) = 1.0;
    for (Eigen::Index b = a + 1; b < t_len; ++b) {
      double value = 0.0;
      if (norms(a) >= kNormEps && norms(b) >= kNormEps) {
        value = rows.row(a).dot(rows.row(b)) / (norms(a) * norms(b));
        value = std::clamp(value, -1.0, 1.0);
        // Identical frames must read exactly 1.0; the dot product alone can
        // land an ulp short.
        if (value > 1.0 - 1e-9 && rows_bitwise_equal(rows, a, b)) value = 1.0;
      }
      gm.g(a, b) = value;
      gm.g(b, a) = value;
    }
  }
  return gm;
}

GramMatrix gram(const FrameSequence& seq) { return gram_rows(seq.frames); }

FrameSequence self_express(const FrameSequence& a_seq) {
  const Eigen::Index t_len = a_seq.num_frames();
  if (t_len < 1) throw EmptyInput("self_express needs frames");
  if (t_len < 2) throw DegenerateInput("self_express needs at least two frames");

  const Eigen::MatrixXd& a = a_seq.frames;
  Eigen::VectorXd norms(t_len);
  for (Eigen::Index t = 0; t < t_len; ++t) norms(t) = a.row(t).norm();

  FrameSequence out = a_seq;
  out.frames.setZero();
  for (Eigen::Index t = 0; t < t_len; ++t) {
    for (Eigen::Index s = 0; s < t_len; ++s) {
      if (s == t) continue;
      if (norms(t) < kNormEps || norms(s) < kNormEps) continue;  // weight 0
      const double w = a.row(s).dot(a.row(t)) / (norms(s) * norms(t));
      out.frames.row(t) += w * a.row(s);
    }
  }
  return out;
}

namespace {

/// Gradient of the self-expression map.  Given dL/dB returns dL/dA, where
/// B(t) = sum_{s != t} w(s,t) A(s) and w is the cosine between rows s and t.
/// Rows below the norm floor contributed weight 0, so no gradient flows
/// through their weights.
Eigen::MatrixXd self_express_backward(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d_b) {
  const Eigen::Index t_len = a.rows();
  Eigen::VectorXd norms(t_len);
  for (Eigen::Index t = 0; t < t_len; ++t) norms(t) = a.row(t).norm();

  Eigen::MatrixXd d_a = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (Eigen::Index t = 0; t < t_len; ++t) {
    const auto g = d_b.row(t);
    const auto v = a.row(t);
    for (Eigen::Index s = 0; s < t_len; ++s) {
      if (s == t) continue;
      if (norms(t) < kNormEps || norms(s) < kNormEps) continue;
      const auto u = a.row(s);
      const double nu = norms(s), nv = norms(t);
      const double w = u.dot(v) / (nu * nv);
      const double gu = g.dot(u);
      // d(w u)/du = w I + u (dw/du)^T with dw/du = v/(nu nv) - w u/nu^2
      d_a.row(s) += w * g + gu * (v / (nu * nv) - w * u / (nu * nu));
      // dw/dv = u/(nu nv) - w v/nv^2
      d_a.row(t) += gu * (u / (nu * nv) - w * v / (nv * nv));
    }
  }
  return d_a;
}

}  // namespace

void SeaConfig::validate() const {
  if (hidden < 1 || code_dim < 1) throw ConfigError("hidden/code_dim must be positive");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (!(lr >= 0.0)) throw ConfigError("lr must be >= 0");
}

double sea_loss_and_gradients(const SeaModel& model, const std::vector<FrameSequence>& data,
                              SeaGrads* grads) {
  if (data.empty()) throw EmptyInput("no training data");
  double loss = 0.0;
  for (const auto& utt : data) {
    if (utt.dim() != model.input_dim()) throw DimMismatch("utterance dim != model input dim");
    const Eigen::MatrixXd& x = utt.frames;

    ForwardCache enc_cache = forward_cached(model.encoder, x);
    const Eigen::MatrixXd& a = enc_cache.output();

    FrameSequence a_seq;
    a_seq.frames = a;
    const Eigen::MatrixXd b = self_express(a_seq).frames;

    ForwardCache direct_cache = forward_cached(model.decoder_direct, a);
    ForwardCache context_cache = forward_cached(model.decoder_context, b);

    const Eigen::MatrixXd direct_err = direct_cache.output() - x;
    const Eigen::MatrixXd context_err = context_cache.output() - x;
    loss += direct_err.squaredNorm() + context_err.squaredNorm();

    if (grads != nullptr) {
      const Eigen::MatrixXd d_a_direct =
          backward(model.decoder_direct, direct_cache, 2.0 * direct_err, &grads->decoder_direct);
      const Eigen::MatrixXd d_b =
          backward(model.decoder_context, context_cache, 2.0 * context_err, &grads->decoder_context);
      const Eigen::MatrixXd d_a = d_a_direct + self_express_backward(a, d_b);
      backward(model.encoder, enc_cache, d_a, &grads->encoder);
    }
  }
  return loss;
}

SeaTrainResult train_sea(const std::vector<FrameSequence>& data, const SeaConfig& cfg) {
  cfg.validate();
  if (data.empty()) throw ConfigError("no training data");
  const Eigen::Index d = data.front().dim();
  for (const auto& utt : data) {
    if (utt.dim() != d) throw DimMismatch("inconsistent feature dims in dataset");
  }

  Rng rng(cfg.seed);
  SeaTrainResult result;
  result.model.encoder = TinyNet::make_two_layer(static_cast<int>(d), cfg.hidden, cfg.code_dim, rng);
  result.model.decoder_direct = TinyNet::make_two_layer(cfg.code_dim, cfg.hidden, static_cast<int>(d), rng);
  result.model.decoder_context = TinyNet::make_two_layer(cfg.code_dim, cfg.hidden, static_cast<int>(d), rng);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    SeaGrads grads{NetGrads::zeros_like(result.model.encoder),
                   NetGrads::zeros_like(result.model.decoder_direct),
                   NetGrads::zeros_like(result.model.decoder_context)};
    const double loss = sea_loss_and_gradients(result.model, data, &grads);
    if (!std::isfinite(loss)) throw NumericalError("loss diverged at epoch " + std::to_string(epoch));
    result.loss_trace.push_back(loss);
    apply_step(&result.model.encoder, grads.encoder, cfg.lr);
    apply_step(&result.model.decoder_direct, grads.decoder_direct, cfg.lr);
    apply_step(&result.model.decoder_context, grads.decoder_context, cfg.lr);
  }
  const double final_loss = sea_loss_and_gradients(result.model, data, nullptr);
  if (!std::isfinite(final_loss)) throw NumericalError("final loss non-finite");
  result.loss_trace.push_back(final_loss);
  return result;
}

FrameSequence embed(const SeaModel& model, const FrameSequence& seq) {
  if (seq.dim() != model.input_dim()) throw DimMismatch("embed: dim mismatch");
  FrameSequence out = seq;
  out.frames = forward(model.encoder, seq.frames);
  return out;
}

void save_sea(const std::string& path, const SeaModel& model) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "dims: " << model.input_dim() << ' ' << model.encoder.layers.front().weight.rows() << ' '
      << model.code_dim() << '\n';
  write_net_blocks(out, "encoder", model.encoder);
  write_net_blocks(out, "decoder_direct", model.decoder_direct);
  write_net_blocks(out, "decoder_context", model.decoder_context);
  if (!out) throw IoError("write failed: " + path);
}

SeaModel load_sea(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string tag;
  Eigen::Index d = 0, h = 0, a = 0;
  if (!(in >> tag >> d >> h >> a) || tag != "dims:") throw FormatError("bad model header: " + path);
  SeaModel model;
  model.encoder = read_net_blocks(in, "encoder", 2);
  model.decoder_direct = read_net_blocks(in, "decoder_direct", 2);
  model.decoder_context = read_net_blocks(in, "decoder_context", 2);
  if (model.input_dim() != d || model.code_dim() != a) throw FormatError("model dims disagree: " + path);
  return model;
}

}  // namespace rhythmkit
