// rhythmkit/trainkit.cpp

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

#include "rhythmkit/trainkit.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "rhythmkit/errors.hpp"
#include "rhythmkit/evalkit.hpp"

namespace rhythmkit {

void ToyConfig::validate() const {
  if (code_dim < 1 || hidden < 1 || embed_dim < 1) throw ConfigError("dims must be positive");
  if (steps < 0) throw ConfigError("steps must be >= 0");
  if (!(lr >= 0.0)) throw ConfigError("lr must be >= 0");
  if (!(duration_loss_weight >= 0.0)) throw ConfigError("duration_loss_weight must be >= 0");
  if (resample_mode == ResampleMode::kRandomized) tau.validate();
}

ToyModel init_toy_model(int feat_dim, int n_domains, const ToyConfig& cfg, Rng& rng) {
  cfg.validate();
  if (feat_dim < 1) throw ConfigError("feat_dim must be positive");
  if (n_domains < 1) throw ConfigError("need at least one domain");
  ToyModel model;
  model.encoder = TinyNet::make_two_layer(feat_dim, cfg.hidden, cfg.code_dim, rng);
  model.decoder = TinyNet::make_two_layer(cfg.code_dim + cfg.embed_dim, cfg.hidden, feat_dim, rng);
  model.duration_head = TinyNet::make_two_layer(cfg.code_dim + cfg.embed_dim, cfg.hidden, 1, rng);
  model.domain_table.resize(n_domains, cfg.embed_dim);
  for (int d = 0; d < n_domains; ++d) {
    for (int e = 0; e < cfg.embed_dim; ++e) model.domain_table(d, e) = rng.uniform(-0.5, 0.5);
  }
  return model;
}

namespace {

int domain_of(const SyntheticUtterance& utt) {
  if (!utt.seq.domain_id.has_value()) throw ConfigError("utterance lacks a domain id");
  return *utt.seq.domain_id;
}

int check_domains(const std::vector<SyntheticUtterance>& data, int min_domains) {
  if (data.empty()) throw ConfigError("no training data");
  std::set<int> domains;
  int max_id = 0;
  for (const auto& utt : data) {
    const int d = domain_of(utt);
    if (d < 0) throw ConfigError("domain ids must be non-negative");
    domains.insert(d);
    max_id = std::max(max_id, d);
  }
  if (static_cast<int>(domains.size()) < min_domains) {
    throw ConfigError("need at least " + std::to_string(min_domains) + " domains");
  }
  return max_id + 1;
}

Segmentation segmentation_for(const Eigen::MatrixXd& z, const Eigen::MatrixXd& x,
                              const ToyConfig& cfg, Rng& step_rng) {
  const int t_len = static_cast<int>(z.rows());
  if (cfg.resample_mode == ResampleMode::kOff) return Segmentation::singletons(t_len);
  const GramMatrix gm = gram_rows(cfg.gram_source == GramSource::kCodes ? z : x);
  const ThresholdParams params = cfg.resample_mode == ResampleMode::kFixedTau
                                     ? ThresholdParams::fixed(cfg.fixed_tau)
                                     : cfg.tau;
  return segment(gm, params, step_rng).segmentation;
}

Eigen::MatrixXd with_domain_embedding(const Eigen::MatrixXd& codes, const Eigen::RowVectorXd& emb) {
  Eigen::MatrixXd joined(codes.rows(), codes.cols() + emb.cols());
  joined.leftCols(codes.cols()) = codes;
  joined.rightCols(emb.cols()) = emb.replicate(codes.rows(), 1);
  return joined;
}

struct SyncStep {
  double loss = 0.0;
  NetGrads enc_grads;
  NetGrads dec_grads;
  Eigen::RowVectorXd emb_grad;
};

/// Synchronous objective for one utterance: the resampled codes are
/// realigned to the input length, so the reconstruction is frame-aligned.
SyncStep sync_step(const ToyModel& model, const SyntheticUtterance& utt, const ToyConfig& cfg,
                   Rng& step_rng, bool want_grads) {
  const Eigen::MatrixXd& x = utt.seq.frames;
  const int dom = domain_of(utt);

  SyncStep out;
  out.enc_grads = NetGrads::zeros_like(model.encoder);
  out.dec_grads = NetGrads::zeros_like(model.decoder);
  out.emb_grad = Eigen::RowVectorXd::Zero(model.embed_dim());

  const ForwardCache enc_cache = forward_cached(model.encoder, x);
  const Eigen::MatrixXd& z = enc_cache.output();

  const Segmentation seg = segmentation_for(z, x, cfg, step_rng);
  FrameSequence z_seq;
  z_seq.frames = z;
  const ResampleResult pooled = pool(z_seq, seg);
  const Eigen::MatrixXd realigned = realign(pooled).frames;

  const Eigen::MatrixXd dec_in = with_domain_embedding(realigned, model.domain_table.row(dom));
  const ForwardCache dec_cache = forward_cached(model.decoder, dec_in);
  const Eigen::MatrixXd err = dec_cache.output() - x;
  out.loss = err.squaredNorm();
  if (!want_grads) return out;

  const Eigen::MatrixXd d_in = backward(model.decoder, dec_cache, 2.0 * err, &out.dec_grads);
  const Eigen::MatrixXd d_realigned = d_in.leftCols(model.code_dim());
  out.emb_grad = d_in.rightCols(model.embed_dim()).colwise().sum();

  // Transpose of realign+pool: gradients of a segment's code are shared by
  // its frames; inserted codes were deleted by realign, so nothing flows.
  Eigen::MatrixXd d_z = Eigen::MatrixXd::Zero(z.rows(), z.cols());
  for (const auto& s : seg.segments) {
    if (s.kind == SegmentKind::kInserted || s.length() == 0) continue;
    const Eigen::RowVectorXd g_code =
        d_realigned.middleRows(s.begin, s.length()).colwise().sum() / s.length();
    for (int t = s.begin; t < s.end; ++t) d_z.row(t) += g_code;
  }
  backward(model.encoder, enc_cache, d_z, &out.enc_grads);
  return out;
}

struct AsyncStep {
  double loss = 0.0;
  NetGrads enc_grads;
  NetGrads dec_grads;
  NetGrads dur_grads;
  Eigen::RowVectorXd emb_grad;
};

/// Asynchronous objective for one utterance: the decoder sees the pooled
/// codes directly; each code is scored against all frames of its segment
/// and its predicted duration against the true segment length.
AsyncStep async_step(const ToyModel& model, const SyntheticUtterance& utt, const ToyConfig& cfg,
                     Rng& step_rng, bool want_grads, bool through_encoder) {
  const Eigen::MatrixXd& x = utt.seq.frames;
  const int dom = domain_of(utt);

  AsyncStep out;
  out.enc_grads = NetGrads::zeros_like(model.encoder);
  out.dec_grads = NetGrads::zeros_like(model.decoder);
  out.dur_grads = NetGrads::zeros_like(model.duration_head);
  out.emb_grad = Eigen::RowVectorXd::Zero(model.embed_dim());

  const ForwardCache enc_cache = forward_cached(model.encoder, x);
  const Eigen::MatrixXd& z = enc_cache.output();

  const Segmentation seg = segmentation_for(z, x, cfg, step_rng);
  FrameSequence z_seq;
  z_seq.frames = z;
  const ResampleResult pooled = pool(z_seq, seg);
  const auto n_codes = pooled.codes.rows();

  const Eigen::MatrixXd joint_in = with_domain_embedding(pooled.codes, model.domain_table.row(dom));
  const ForwardCache dec_cache = forward_cached(model.decoder, joint_in);
  const ForwardCache dur_cache = forward_cached(model.duration_head, joint_in);
  const Eigen::MatrixXd& y = dec_cache.output();
  const Eigen::MatrixXd& durations = dur_cache.output();

  Eigen::MatrixXd d_y = Eigen::MatrixXd::Zero(n_codes, x.cols());
  Eigen::MatrixXd d_dur = Eigen::MatrixXd::Zero(n_codes, 1);
  for (Eigen::Index m = 0; m < n_codes; ++m) {
    const auto& s = seg.segments[static_cast<size_t>(m)];
    for (int t = s.begin; t < s.end; ++t) {
      const Eigen::RowVectorXd err = y.row(m) - x.row(t);
      out.loss += err.squaredNorm();
      d_y.row(m) += 2.0 * err;
    }
    const double dur_err = durations(m, 0) - s.length();
    out.loss += cfg.duration_loss_weight * dur_err * dur_err;
    d_dur(m, 0) = 2.0 * cfg.duration_loss_weight * dur_err;
  }
  if (!want_grads) return out;

  const Eigen::MatrixXd d_in_dec = backward(model.decoder, dec_cache, d_y, &out.dec_grads);
  const Eigen::MatrixXd d_in_dur = backward(model.duration_head, dur_cache, d_dur, &out.dur_grads);
  const Eigen::MatrixXd d_in = d_in_dec + d_in_dur;
  out.emb_grad = d_in.rightCols(model.embed_dim()).colwise().sum();

  if (through_encoder) {
    const Eigen::MatrixXd d_codes = d_in.leftCols(model.code_dim());
    Eigen::MatrixXd d_z = Eigen::MatrixXd::Zero(z.rows(), z.cols());
    for (Eigen::Index m = 0; m < n_codes; ++m) {
      const auto& s = seg.segments[static_cast<size_t>(m)];
      if (s.kind == SegmentKind::kInserted) {
        d_z.row(s.begin) += d_codes.row(m);  // inserted code is Z(t_m) itself
      } else {
        for (int t = s.begin; t < s.end; ++t) d_z.row(t) += d_codes.row(m) / s.length();
      }
    }
    backward(model.encoder, enc_cache, d_z, &out.enc_grads);
  }
  return out;
}

void check_finite(double loss, int step) {
  if (!std::isfinite(loss)) throw NumericalError("loss diverged at step " + std::to_string(step));
}

}  // namespace

ToyTrainResult train_sync(const std::vector<SyntheticUtterance>& data, const ToyConfig& cfg) {
  cfg.validate();
  const int n_domains = check_domains(data, 2);
  Rng init_rng(cfg.seed);

  ToyTrainResult result;
  result.model = init_toy_model(static_cast<int>(data.front().seq.dim()), n_domains, cfg, init_rng);

  for (int step = 0; step < cfg.steps; ++step) {
    const auto& utt = data[static_cast<size_t>(step) % data.size()];
    Rng step_rng(derive_seed(cfg.seed, static_cast<uint64_t>(step)));
    SyncStep s = sync_step(result.model, utt, cfg, step_rng, /*want_grads=*/true);
    check_finite(s.loss, step);
    result.loss_trace.push_back(s.loss);
    apply_step(&result.model.encoder, s.enc_grads, cfg.lr);
    apply_step(&result.model.decoder, s.dec_grads, cfg.lr);
    result.model.domain_table.row(domain_of(utt)) -= cfg.lr * s.emb_grad;
  }

  Rng final_rng(derive_seed(cfg.seed, static_cast<uint64_t>(cfg.steps)));
  const SyncStep final_step =
      sync_step(result.model, data.front(), cfg, final_rng, /*want_grads=*/false);
  check_finite(final_step.loss, cfg.steps);
  result.loss_trace.push_back(final_step.loss);
  return result;
}

namespace {

ToyTrainResult train_async_impl(ToyModel model, const std::vector<SyntheticUtterance>& data,
                                const ToyConfig& cfg, bool through_encoder) {
  cfg.validate();
  check_domains(data, 2);
  if (model.num_domains() < 2) throw ConfigError("model has fewer than two domains");

  ToyTrainResult result;
  result.model = std::move(model);
  for (int step = 0; step < cfg.steps; ++step) {
    const auto& utt = data[static_cast<size_t>(step) % data.size()];
    Rng step_rng(derive_seed(cfg.seed, static_cast<uint64_t>(step)));
    AsyncStep s = async_step(result.model, utt, cfg, step_rng, /*want_grads=*/true, through_encoder);
    check_finite(s.loss, step);
    result.loss_trace.push_back(s.loss);
    if (through_encoder) apply_step(&result.model.encoder, s.enc_grads, cfg.lr);
    apply_step(&result.model.decoder, s.dec_grads, cfg.lr);
    apply_step(&result.model.duration_head, s.dur_grads, cfg.lr);
    result.model.domain_table.row(domain_of(utt)) -= cfg.lr * s.emb_grad;
  }

  Rng final_rng(derive_seed(cfg.seed, static_cast<uint64_t>(cfg.steps)));
  const AsyncStep final_step = async_step(result.model, data.front(), cfg, final_rng,
                                          /*want_grads=*/false, false);
  check_finite(final_step.loss, cfg.steps);
  result.loss_trace.push_back(final_step.loss);
  return result;
}

}  // namespace

ToyTrainResult train_async(const ToyModel& model, const std::vector<SyntheticUtterance>& data,
                           const ToyConfig& cfg) {
  return train_async_impl(model, data, cfg, /*through_encoder=*/false);
}

ToyTrainResult train_single_stage(const std::vector<SyntheticUtterance>& data, const ToyConfig& cfg) {
  cfg.validate();
  const int n_domains = check_domains(data, 2);
  Rng init_rng(cfg.seed);
  ToyModel model = init_toy_model(static_cast<int>(data.front().seq.dim()), n_domains, cfg, init_rng);
  return train_async_impl(std::move(model), data, cfg, /*through_encoder=*/true);
}

FrameSequence convert(const ToyModel& model, const FrameSequence& utt, int target_domain) {
  if (target_domain < 0 || target_domain >= model.num_domains()) {
    throw UnknownDomain("domain id " + std::to_string(target_domain) + " not in table");
  }
  if (utt.dim() != model.feat_dim()) throw DimMismatch("convert: feature dim mismatch");

  // Test-time rule: threshold 1, i.e. the codes pass through unchanged.
  const Eigen::MatrixXd z = forward(model.encoder, utt.frames);
  const Eigen::MatrixXd joint_in = with_domain_embedding(z, model.domain_table.row(target_domain));
  const Eigen::MatrixXd y = forward(model.decoder, joint_in);
  const Eigen::MatrixXd durations = forward(model.duration_head, joint_in);

  std::vector<int> lengths(static_cast<size_t>(y.rows()));
  Eigen::Index total = 0;
  for (Eigen::Index m = 0; m < y.rows(); ++m) {
    const long n = std::lround(durations(m, 0));
    lengths[static_cast<size_t>(m)] = static_cast<int>(std::max(1L, n));
    total += lengths[static_cast<size_t>(m)];
  }

  FrameSequence out;
  out.frame_period = utt.frame_period;
  out.domain_id = target_domain;
  out.frames.resize(total, y.cols());
  Eigen::Index at = 0;
  for (Eigen::Index m = 0; m < y.rows(); ++m) {
    for (int k = 0; k < lengths[static_cast<size_t>(m)]; ++k) out.frames.row(at++) = y.row(m);
  }
  return out;
}

void save_toy(const std::string& path, const ToyModel& model) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "toy_dims: " << model.feat_dim() << ' ' << model.encoder.layers.front().weight.rows() << ' '
      << model.code_dim() << ' ' << model.embed_dim() << ' ' << model.num_domains() << '\n';
  write_net_blocks(out, "encoder", model.encoder);
  write_net_blocks(out, "decoder", model.decoder);
  write_net_blocks(out, "duration_head", model.duration_head);
  write_matrix_block(out, "domain_table", model.domain_table);
  if (!out) throw IoError("write failed: " + path);
}

ToyModel load_toy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string tag;
  Eigen::Index d = 0, h = 0, c = 0, e = 0, n = 0;
  if (!(in >> tag >> d >> h >> c >> e >> n) || tag != "toy_dims:") {
    throw FormatError("bad model header: " + path);
  }
  ToyModel model;
  model.encoder = read_net_blocks(in, "encoder", 2);
  model.decoder = read_net_blocks(in, "decoder", 2);
  model.duration_head = read_net_blocks(in, "duration_head", 2);
  model.domain_table = read_matrix_block(in, "domain_table");
  if (model.feat_dim() != d || model.code_dim() != c || model.embed_dim() != e ||
      model.num_domains() != n) {
    throw FormatError("model dims disagree: " + path);
  }
  return model;
}

TwoStageOutcome run_two_stage_trial(uint64_t seed, const TwoStageExperimentConfig& cfg) {
  Rng data_rng(derive_seed(seed, 0));
  std::vector<SyntheticUtterance> corpus;
  for (int dom = 0; dom < 2; ++dom) {
    const RhythmStyle& style = dom == 0 ? cfg.fast_style : cfg.slow_style;
    for (int i = 0; i < cfg.utts_per_domain; ++i) {
      SyntheticUtterance utt = make_utterance(data_rng, cfg.alphabet, cfg.min_phones, cfg.max_phones,
                                              style, cfg.base_reps, cfg.dim, cfg.duration_jitter);
      utt.seq.domain_id = dom;
      corpus.push_back(std::move(utt));
    }
  }

  TwoStageOutcome outcome;
  if (cfg.single_stage) {
    ToyConfig stage_cfg = cfg.async_cfg;
    stage_cfg.seed = derive_seed(seed, 1);
    stage_cfg.steps = cfg.sync_cfg.steps + cfg.async_cfg.steps;  // same total budget
    ToyTrainResult trained = train_single_stage(corpus, stage_cfg);
    outcome.async_trace = std::move(trained.loss_trace);
    outcome.model = std::move(trained.model);
  } else {
    ToyConfig sync_cfg = cfg.sync_cfg;
    sync_cfg.seed = derive_seed(seed, 1);
    ToyTrainResult sync_result = train_sync(corpus, sync_cfg);
    outcome.sync_trace = std::move(sync_result.loss_trace);

    ToyConfig async_cfg = cfg.async_cfg;
    async_cfg.seed = derive_seed(seed, 2);
    ToyTrainResult async_result = train_async(sync_result.model, corpus, async_cfg);
    outcome.async_trace = std::move(async_result.loss_trace);
    outcome.model = std::move(async_result.model);
  }

  Rng pair_rng(derive_seed(seed, 3));
  const std::vector<int> phones =
      sample_phones(pair_rng, cfg.alphabet, cfg.min_phones, cfg.max_phones);
  auto [fast_utt, slow_utt] = parallel_pair(pair_rng, phones, cfg.fast_style, cfg.slow_style,
                                            cfg.base_reps, cfg.dim, cfg.duration_jitter);

  outcome.l_f2s = static_cast<int>(convert(outcome.model, fast_utt.seq, 1).num_frames());
  outcome.l_s2f = static_cast<int>(convert(outcome.model, slow_utt.seq, 0).num_frames());
  outcome.rdd = relative_duration_difference(outcome.l_f2s, outcome.l_s2f);
  return outcome;
}

}  // namespace rhythmkit
