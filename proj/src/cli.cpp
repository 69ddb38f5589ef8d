// rhythmkit/cli.cpp

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

#include "rhythmkit/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rhythmkit/csv.hpp"
#include "rhythmkit/errors.hpp"
#include "rhythmkit/evalkit.hpp"
#include "rhythmkit/feats.hpp"
#include "rhythmkit/infotheory.hpp"
#include "rhythmkit/resampler.hpp"
#include "rhythmkit/simrep.hpp"
#include "rhythmkit/synthgen.hpp"
#include "rhythmkit/trainkit.hpp"
#include "rhythmkit/wav.hpp"

namespace rhythmkit::cli {

namespace {

namespace fs = std::filesystem;

std::string out_path(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

void write_loss_csv(const std::string& path, const std::vector<double>& trace) {
  CsvTable table;
  table.header = {"step", "loss"};
  for (size_t i = 0; i < trace.size(); ++i) table.rows.push_back({std::to_string(i), g17(trace[i])});
  write_csv(path, table);
}

void write_codes_csv(const std::string& path, const Eigen::MatrixXd& codes) {
  FrameSequence seq;
  seq.frames = codes;
  write_features_csv(path, seq);
}

UpsampleRule parse_upsample_rule(const std::string& name) {
  if (name == "high-similarity") return UpsampleRule::kHighSimilarity;
  if (name == "permissive") return UpsampleRule::kPermissive;
  throw ConfigError("unknown upsample rule: " + name);
}

struct GramOptions {
  std::string source = "mfcc";  // mfcc | sea
  std::string sea_model_path;
};

GramMatrix gram_for(const GramOptions& opts, const FrameSequence& features) {
  if (opts.source == "mfcc") return gram(normalize(features));
  if (opts.source == "sea") {
    if (opts.sea_model_path.empty()) throw ConfigError("--sea-model required with --gram sea");
    const SeaModel model = load_sea(opts.sea_model_path);
    return gram(embed(model, features));
  }
  throw ConfigError("unknown gram source: " + opts.source);
}

// ---- synth ----------------------------------------------------------------

struct SynthOpts {
  uint64_t seed = 0;
  std::string out;
  int count = 8;
  int alphabet = 6;
  int min_phones = 4;
  int max_phones = 8;
  int base_reps = 3;
  int dim = 13;
  double rate = 1.0;
  double vowel_stretch = 1.0;
  double noise_sd = 0.0;
  double jitter = 0.25;
  int domain_id = -1;
};

void run_synth(const SynthOpts& o) {
  RhythmStyle style{o.rate, o.vowel_stretch, o.noise_sd};
  style.validate();
  Rng rng(o.seed);
  for (int i = 0; i < o.count; ++i) {
    SyntheticUtterance utt = make_utterance(rng, o.alphabet, o.min_phones, o.max_phones, style,
                                            o.base_reps, o.dim, o.jitter);
    if (o.domain_id >= 0) utt.seq.domain_id = o.domain_id;
    char name[32];
    std::snprintf(name, sizeof(name), "utt_%03d", i);
    write_utterance_csv(out_path(o.out, std::string(name) + ".phones.csv"), utt);
    write_features_csv(out_path(o.out, std::string(name) + ".feats.csv"), utt.seq);
  }
  std::ofstream manifest(out_path(o.out, "manifest.txt"));
  manifest << "seed=" << o.seed << '\n'
           << "count=" << o.count << '\n'
           << "alphabet=" << o.alphabet << '\n'
           << "min_phones=" << o.min_phones << '\n'
           << "max_phones=" << o.max_phones << '\n'
           << "base_reps=" << o.base_reps << '\n'
           << "dim=" << o.dim << '\n'
           << "rate=" << g9(o.rate) << '\n'
           << "vowel_stretch=" << g9(o.vowel_stretch) << '\n'
           << "noise_sd=" << g9(o.noise_sd) << '\n'
           << "jitter=" << g9(o.jitter) << '\n';
  if (o.domain_id >= 0) manifest << "domain_id=" << o.domain_id << '\n';
  if (!manifest) throw IoError("cannot write manifest");
}

// ---- features ---------------------------------------------------------------

struct FeaturesOpts {
  std::string wav;
  std::string out;
  std::string format = "mfcc";  // mfcc | logmel
  FeatConfig cfg;
  bool znorm = false;
};

void run_features(const FeaturesOpts& o) {
  const AudioSignal audio = load_wav(o.wav);
  FrameSequence seq;
  if (o.format == "mfcc") {
    seq = mfcc(audio, o.cfg);
  } else if (o.format == "logmel") {
    seq = log_mel_spectrogram(audio, o.cfg);
  } else {
    throw ConfigError("unknown format: " + o.format);
  }
  if (o.znorm) seq = normalize(seq);
  write_features_csv(out_path(o.out, "features.csv"), seq);
}

// ---- sea-train --------------------------------------------------------------

struct SeaTrainOpts {
  std::vector<std::string> features;
  std::string out;
  SeaConfig cfg;
};

void run_sea_train(const SeaTrainOpts& o) {
  std::vector<FrameSequence> data;
  data.reserve(o.features.size());
  for (const auto& path : o.features) data.push_back(read_features_csv(path));
  const SeaTrainResult result = train_sea(data, o.cfg);
  save_sea(out_path(o.out, "sea_model.txt"), result.model);
  write_loss_csv(out_path(o.out, "loss.csv"), result.loss_trace);
}

// ---- resample ---------------------------------------------------------------

struct ResampleOpts {
  std::string features;
  std::string out;
  uint64_t seed = 0;
  std::string mode = "randomized";  // randomized | fixed
  double tau = 1.0;
  ThresholdParams params;
  std::string upsample_rule = "high-similarity";
  GramOptions gram_opts;
};

ThresholdParams resolve_params(const std::string& mode, double tau, ThresholdParams params,
                               const std::string& rule) {
  params.upsample_rule = parse_upsample_rule(rule);
  if (mode == "fixed") {
    if (!(tau > 0.0) || !(tau < 2.0)) throw ConfigError("--tau must lie in (0, 2)");
    params.mode = ThresholdParams::Mode::kFixed;
    params.fixed_tau = tau;
  } else if (mode == "randomized") {
    params.mode = ThresholdParams::Mode::kRandomized;
    params.validate();
  } else {
    throw ConfigError("unknown mode: " + mode);
  }
  return params;
}

void run_resample(const ResampleOpts& o) {
  const FrameSequence features = read_features_csv(o.features);
  const GramMatrix gm = gram_for(o.gram_opts, features);
  const ThresholdParams params = resolve_params(o.mode, o.tau, o.params, o.upsample_rule);
  Rng rng(o.seed);
  const ResampleResult result = resample(features, gm, params, rng);
  write_codes_csv(out_path(o.out, "codes.csv"), result.codes);
  write_segmentation_csv(out_path(o.out, "segmentation.csv"), result.segmentation);
  write_tau_trace_csv(out_path(o.out, "tau_trace.csv"), result.tau_trace);
}

// ---- sweep-tau --------------------------------------------------------------

struct SweepOpts {
  std::string features;
  std::string out;
  double tau_min = 0.90;
  double tau_max = 1.10;
  double tau_step = 0.02;
  std::string upsample_rule = "high-similarity";
  GramOptions gram_opts;
};

void run_sweep(const SweepOpts& o) {
  if (!(o.tau_step > 0.0)) throw ConfigError("--tau-step must be positive");
  const FrameSequence features = read_features_csv(o.features);
  const GramMatrix gm = gram_for(o.gram_opts, features);
  std::vector<double> taus;
  for (double tau = o.tau_min; tau <= o.tau_max + 1e-12; tau += o.tau_step) taus.push_back(tau);
  const auto rows = length_vs_tau_sweep(features, gm, taus, parse_upsample_rule(o.upsample_rule));
  CsvTable table;
  table.header = {"tau", "out_len"};
  for (const auto& row : rows) table.rows.push_back({g9(row.tau), std::to_string(row.out_len)});
  write_csv(out_path(o.out, "sweep.csv"), table);
}

// ---- align-prob -------------------------------------------------------------

struct AlignProbOpts {
  std::string out;
  uint64_t seed = 0;
  std::string method = "similarity";  // similarity | rr | identity
  int trials = 1000;
  double tol = 1e-9;
  double tau = 0.5;
  int alphabet = 6;
  int min_phones = 4;
  int max_phones = 8;
  int base_reps = 3;
  int dim = 16;
  double jitter = 0.25;
  double rate_a = 1.0, stretch_a = 1.0;
  double rate_b = 1.5, stretch_b = 3.0;
  RrConfig rr;
};

void run_align_prob(const AlignProbOpts& o) {
  const RhythmStyle style_a{o.rate_a, o.stretch_a, 0.0};
  const RhythmStyle style_b{o.rate_b, o.stretch_b, 0.0};
  style_a.validate();
  style_b.validate();

  PairGenerator pair_gen = [&](Rng& rng) {
    const std::vector<int> phones = sample_phones(rng, o.alphabet, o.min_phones, o.max_phones);
    auto [a, b] = parallel_pair(rng, phones, style_a, style_b, o.base_reps, o.dim, o.jitter);
    return std::make_pair(std::move(a.seq), std::move(b.seq));
  };

  ResamplerFn resampler;
  if (o.method == "similarity") {
    const double tau = o.tau;
    resampler = [tau](const FrameSequence& seq, Rng& rng) {
      return resample(seq, gram(seq), ThresholdParams::fixed(tau), rng).codes;
    };
  } else if (o.method == "rr") {
    const RrConfig rr = o.rr;
    resampler = [rr](const FrameSequence& seq, Rng& rng) { return rr_baseline(seq, rng, rr).frames; };
  } else if (o.method == "identity") {
    resampler = [](const FrameSequence& seq, Rng&) { return seq.frames; };
  } else {
    throw ConfigError("unknown method: " + o.method);
  }

  const AlignmentEstimate est = alignment_probability(pair_gen, resampler, o.trials, o.tol, o.seed);
  CsvTable table;
  table.header = {"method", "trials", "successes", "p_hat", "ci_lo", "ci_hi"};
  table.rows.push_back({o.method, std::to_string(est.trials), std::to_string(est.successes),
                        g9(est.p_hat), g9(est.ci_lo), g9(est.ci_hi)});
  write_csv(out_path(o.out, "alignprob.csv"), table);
}

// ---- verify-theorems ----------------------------------------------------------

struct TheoremOpts {
  std::string out;
  uint64_t seed = 0;
  int seeds = 200;
};

void run_verify_theorems(const TheoremOpts& o) {
  if (o.seeds < 1) throw ConfigError("--seeds must be >= 1");
  CsvTable table;
  table.header = {"ensemble_id", "I_RZ", "I_RX", "I_RS", "theorem", "pass"};
  int failures = 0;
  auto add_row = [&](int id, const DiscreteEnsemble& ens, const std::string& theorem, double lhs,
                     bool pass) {
    const double i_rx = mutual_information(joint_r_x(ens));
    const double i_rs = mutual_information(joint_r_s(ens));
    table.rows.push_back({std::to_string(id), g9(lhs), g9(i_rx), g9(i_rs), theorem, pass ? "1" : "0"});
    if (!pass) ++failures;
  };

  for (int i = 0; i < o.seeds; ++i) {
    {
      Rng rng(derive_seed(o.seed, static_cast<uint64_t>(i) * 3 + 0));
      const DiscreteEnsemble ens = random_split_ensemble(rng);
      const TheoremReport report = verify_theorem1(ens);
      add_row(i, ens, "injective", report.lhs, report.pass);
    }
    {
      Rng rng(derive_seed(o.seed, static_cast<uint64_t>(i) * 3 + 1));
      const DiscreteEnsemble ens = random_collapse_ensemble(rng);
      const TheoremReport report = verify_theorem2(ens);
      add_row(i, ens, "collapse", report.lhs, report.pass);
    }
    {
      Rng rng(derive_seed(o.seed, static_cast<uint64_t>(i) * 3 + 2));
      const DiscreteEnsemble ens = random_noisy_ensemble(rng);
      const double i_rz = mutual_information(joint_r_z(ens));
      const double i_rx = mutual_information(joint_r_x(ens));
      add_row(i, ens, "dpi", i_rz, i_rz <= i_rx + 1e-9);
    }
  }
  write_csv(out_path(o.out, "theorems.csv"), table);

  std::printf("%-12s %-10s %-10s %-10s %s\n", "ensemble", "I_RZ", "I_RX", "I_RS", "pass");
  for (const auto& row : table.rows) {
    std::printf("%-12s %-10s %-10s %-10s %s\n", (row[4] + "/" + row[0]).c_str(), row[1].c_str(),
                row[2].c_str(), row[3].c_str(), row[5].c_str());
  }
  std::printf("checked %d ensembles, failures: %d\n", static_cast<int>(table.rows.size()), failures);
  if (failures > 0) throw NumericalError(std::to_string(failures) + " ensembles failed verification");
}

// ---- two-stage ----------------------------------------------------------------

struct TwoStageOpts {
  std::string out;
  uint64_t seed = 0;
  int runs = 1;
  bool single_stage = false;
  TwoStageExperimentConfig cfg;
  std::string async_mode = "fixed";  // fixed | randomized
  double async_tau = 0.5;
};

void run_two_stage(const TwoStageOpts& o) {
  if (o.runs < 1) throw ConfigError("--runs must be >= 1");
  TwoStageExperimentConfig cfg = o.cfg;
  cfg.single_stage = o.single_stage;
  if (o.async_mode == "fixed") {
    cfg.async_cfg.resample_mode = ResampleMode::kFixedTau;
    cfg.async_cfg.fixed_tau = o.async_tau;
  } else if (o.async_mode == "randomized") {
    cfg.async_cfg.resample_mode = ResampleMode::kRandomized;
  } else {
    throw ConfigError("unknown async mode: " + o.async_mode);
  }

  CsvTable table;
  table.header = {"pair_id", "L_f2s", "L_s2f", "rdd"};
  int positive = 0;
  TwoStageOutcome last;
  for (int run = 0; run < o.runs; ++run) {
    last = run_two_stage_trial(derive_seed(o.seed, static_cast<uint64_t>(run)), cfg);
    table.rows.push_back({std::to_string(run), std::to_string(last.l_f2s),
                          std::to_string(last.l_s2f), g9(last.rdd)});
    if (last.rdd > 0.0) ++positive;
  }
  write_csv(out_path(o.out, "rdd_report.csv"), table);
  if (!last.sync_trace.empty()) write_loss_csv(out_path(o.out, "loss_sync.csv"), last.sync_trace);
  write_loss_csv(out_path(o.out, "loss_async.csv"), last.async_trace);
  save_toy(out_path(o.out, "model.txt"), last.model);

  std::ofstream summary(out_path(o.out, "summary.txt"));
  summary << "runs=" << o.runs << '\n'
          << "positive=" << positive << '\n'
          << "positive_rate=" << g9(static_cast<double>(positive) / o.runs) << '\n'
          << "single_stage=" << (o.single_stage ? 1 : 0) << '\n';
  std::printf("runs=%d positive=%d rate=%s\n", o.runs, positive,
              g9(static_cast<double>(positive) / o.runs).c_str());
}

// ---- rdd ------------------------------------------------------------------------

struct RddOpts {
  std::string input;
  std::string out;
};

void run_rdd(const RddOpts& o) {
  const CsvTable in = read_csv(o.input);
  if (in.header.size() < 3 || in.header[0] != "pair_id" || in.header[1] != "L_f2s" ||
      in.header[2] != "L_s2f") {
    throw FormatError("expected header pair_id,L_f2s,L_s2f in " + o.input);
  }
  CsvTable table;
  table.header = {"pair_id", "L_f2s", "L_s2f", "rdd"};
  for (const auto& row : in.rows) {
    if (row.size() < 3) throw FormatError("short row in " + o.input);
    int l_f2s = 0, l_s2f = 0;
    try {
      l_f2s = std::stoi(row[1]);
      l_s2f = std::stoi(row[2]);
    } catch (const std::exception&) {
      throw FormatError("non-integer length in " + o.input);
    }
    table.rows.push_back({row[0], row[1], row[2], g9(relative_duration_difference(l_f2s, l_s2f))});
  }
  write_csv(out_path(o.out, "rdd.csv"), table);
}

void add_gram_options(CLI::App* sub, GramOptions* opts) {
  sub->add_option("--gram", opts->source, "similarity source: mfcc | sea")->capture_default_str();
  sub->add_option("--sea-model", opts->sea_model_path, "model file for --gram sea");
}

void add_tau_options(CLI::App* sub, ThresholdParams* params) {
  sub->add_option("--tau.u_l", params->u_l, "global draw lower bound")->capture_default_str();
  sub->add_option("--tau.u_r", params->u_r, "global draw upper bound")->capture_default_str();
  sub->add_option("--tau.local_halfwidth", params->local_halfwidth, "local draw halfwidth")
      ->capture_default_str();
  sub->add_option("--tau.window_b", params->window_b, "quantile window halfwidth")
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"similarity-based temporal resampling toolkit"};
  app.require_subcommand(1);

  auto synth_opts = std::make_shared<SynthOpts>();
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with known rhythm");
  synth->add_option("--seed", synth_opts->seed, "master seed")->envname("RHYTHM_KIT_SEED")->capture_default_str();
  synth->add_option("--out", synth_opts->out, "output directory")->required();
  synth->add_option("--count", synth_opts->count)->capture_default_str();
  synth->add_option("--alphabet", synth_opts->alphabet)->capture_default_str();
  synth->add_option("--min-phones", synth_opts->min_phones)->capture_default_str();
  synth->add_option("--max-phones", synth_opts->max_phones)->capture_default_str();
  synth->add_option("--base-reps", synth_opts->base_reps)->capture_default_str();
  synth->add_option("--dim", synth_opts->dim)->capture_default_str();
  synth->add_option("--rate", synth_opts->rate)->capture_default_str();
  synth->add_option("--vowel-stretch", synth_opts->vowel_stretch)->capture_default_str();
  synth->add_option("--noise-sd", synth_opts->noise_sd)->capture_default_str();
  synth->add_option("--jitter", synth_opts->jitter)->capture_default_str();
  synth->add_option("--domain-id", synth_opts->domain_id, "domain id recorded in the manifest")
      ->capture_default_str();
  synth->set_config("--config");
  synth->callback([synth_opts] { run_synth(*synth_opts); });

  auto feat_opts = std::make_shared<FeaturesOpts>();
  auto* features = app.add_subcommand("features", "WAV to feature CSV");
  features->add_option("--wav", feat_opts->wav, "input RIFF/WAVE file (PCM16 mono)")->required();
  features->add_option("--out", feat_opts->out, "output directory")->required();
  features->add_option("--format", feat_opts->format, "mfcc | logmel")->capture_default_str();
  features->add_option("--frame-len-s", feat_opts->cfg.frame_len_s)->capture_default_str();
  features->add_option("--hop-s", feat_opts->cfg.hop_s)->capture_default_str();
  features->add_option("--n-mels", feat_opts->cfg.n_mels)->capture_default_str();
  features->add_option("--n-coeffs", feat_opts->cfg.n_coeffs)->capture_default_str();
  features->add_flag("--normalize", feat_opts->znorm, "per-dimension z-score");
  features->set_config("--config");
  features->callback([feat_opts] { run_features(*feat_opts); });

  auto sea_opts = std::make_shared<SeaTrainOpts>();
  auto* sea = app.add_subcommand("sea-train", "train the self-expressive similarity model");
  sea->add_option("--features", sea_opts->features, "feature CSV files")->required()->expected(-1);
  sea->add_option("--out", sea_opts->out, "output directory")->required();
  sea->add_option("--seed", sea_opts->cfg.seed)->envname("RHYTHM_KIT_SEED")->capture_default_str();
  sea->add_option("--epochs", sea_opts->cfg.epochs)->capture_default_str();
  sea->add_option("--lr", sea_opts->cfg.lr)->capture_default_str();
  sea->add_option("--hidden", sea_opts->cfg.hidden)->capture_default_str();
  sea->add_option("--code-dim", sea_opts->cfg.code_dim)->capture_default_str();
  sea->set_config("--config");
  sea->callback([sea_opts] { run_sea_train(*sea_opts); });

  auto resample_opts = std::make_shared<ResampleOpts>();
  auto* resample_cmd = app.add_subcommand("resample", "segment and pool a feature sequence");
  resample_cmd->add_option("--features", resample_opts->features, "feature CSV")->required();
  resample_cmd->add_option("--out", resample_opts->out, "output directory")->required();
  resample_cmd->add_option("--seed", resample_opts->seed)->envname("RHYTHM_KIT_SEED")->capture_default_str();
  resample_cmd->add_option("--mode", resample_opts->mode, "randomized | fixed")->capture_default_str();
  resample_cmd->add_option("--tau", resample_opts->tau, "threshold for --mode fixed")->capture_default_str();
  add_tau_options(resample_cmd, &resample_opts->params);
  resample_cmd->add_option("--upsample_rule", resample_opts->upsample_rule,
                           "high-similarity | permissive")
      ->capture_default_str();
  add_gram_options(resample_cmd, &resample_opts->gram_opts);
  resample_cmd->set_config("--config");
  resample_cmd->callback([resample_opts] { run_resample(*resample_opts); });

  auto sweep_opts = std::make_shared<SweepOpts>();
  auto* sweep = app.add_subcommand("sweep-tau", "output length as a function of the threshold");
  sweep->add_option("--features", sweep_opts->features, "feature CSV")->required();
  sweep->add_option("--out", sweep_opts->out, "output directory")->required();
  sweep->add_option("--tau-min", sweep_opts->tau_min)->capture_default_str();
  sweep->add_option("--tau-max", sweep_opts->tau_max)->capture_default_str();
  sweep->add_option("--tau-step", sweep_opts->tau_step)->capture_default_str();
  sweep->add_option("--upsample_rule", sweep_opts->upsample_rule)->capture_default_str();
  add_gram_options(sweep, &sweep_opts->gram_opts);
  sweep->set_config("--config");
  sweep->callback([sweep_opts] { run_sweep(*sweep_opts); });

  auto align_opts = std::make_shared<AlignProbOpts>();
  auto* align = app.add_subcommand("align-prob", "alignment probability of same-content pairs");
  align->add_option("--out", align_opts->out, "output directory")->required();
  align->add_option("--seed", align_opts->seed)->envname("RHYTHM_KIT_SEED")->capture_default_str();
  align->add_option("--method", align_opts->method, "similarity | rr | identity")->capture_default_str();
  align->add_option("--trials", align_opts->trials)->capture_default_str();
  align->add_option("--tol", align_opts->tol)->capture_default_str();
  align->add_option("--tau", align_opts->tau, "fixed threshold for --method similarity")
      ->capture_default_str();
  align->add_option("--alphabet", align_opts->alphabet)->capture_default_str();
  align->add_option("--min-phones", align_opts->min_phones)->capture_default_str();
  align->add_option("--max-phones", align_opts->max_phones)->capture_default_str();
  align->add_option("--base-reps", align_opts->base_reps)->capture_default_str();
  align->add_option("--dim", align_opts->dim)->capture_default_str();
  align->add_option("--jitter", align_opts->jitter)->capture_default_str();
  align->add_option("--rate-a", align_opts->rate_a)->capture_default_str();
  align->add_option("--stretch-a", align_opts->stretch_a)->capture_default_str();
  align->add_option("--rate-b", align_opts->rate_b)->capture_default_str();
  align->add_option("--stretch-b", align_opts->stretch_b)->capture_default_str();
  align->add_option("--rr-seg-min", align_opts->rr.seg_len_min)->capture_default_str();
  align->add_option("--rr-seg-max", align_opts->rr.seg_len_max)->capture_default_str();
  align->add_option("--rr-rate-min", align_opts->rr.rate_min)->capture_default_str();
  align->add_option("--rr-rate-max", align_opts->rr.rate_max)->capture_default_str();
  align->set_config("--config");
  align->callback([align_opts] { run_align_prob(*align_opts); });

  auto theorem_opts = std::make_shared<TheoremOpts>();
  auto* theorems = app.add_subcommand("verify-theorems", "exact channel-information checks");
  theorems->add_option("--out", theorem_opts->out, "output directory")->required();
  theorems->add_option("--seed", theorem_opts->seed)->envname("RHYTHM_KIT_SEED")->capture_default_str();
  theorems->add_option("--seeds", theorem_opts->seeds, "number of random ensembles per family")
      ->capture_default_str();
  theorems->set_config("--config");
  theorems->callback([theorem_opts] { run_verify_theorems(*theorem_opts); });

  auto two_opts = std::make_shared<TwoStageOpts>();
  auto* two = app.add_subcommand("two-stage", "toy rhythm-conversion experiment");
  two->add_option("--out", two_opts->out, "output directory")->required();
  two->add_option("--seed", two_opts->seed)->envname("RHYTHM_KIT_SEED")->capture_default_str();
  two->add_option("--runs", two_opts->runs)->capture_default_str();
  two->add_flag("--single-stage", two_opts->single_stage, "train end-to-end without the stage split");
  two->add_option("--utts-per-domain", two_opts->cfg.utts_per_domain)->capture_default_str();
  two->add_option("--alphabet", two_opts->cfg.alphabet)->capture_default_str();
  two->add_option("--min-phones", two_opts->cfg.min_phones)->capture_default_str();
  two->add_option("--max-phones", two_opts->cfg.max_phones)->capture_default_str();
  two->add_option("--base-reps", two_opts->cfg.base_reps)->capture_default_str();
  two->add_option("--dim", two_opts->cfg.dim)->capture_default_str();
  two->add_option("--jitter", two_opts->cfg.duration_jitter)->capture_default_str();
  two->add_option("--fast-rate", two_opts->cfg.fast_style.rate)->capture_default_str();
  two->add_option("--fast-stretch", two_opts->cfg.fast_style.vowel_stretch)->capture_default_str();
  two->add_option("--slow-rate", two_opts->cfg.slow_style.rate)->capture_default_str();
  two->add_option("--slow-stretch", two_opts->cfg.slow_style.vowel_stretch)->capture_default_str();
  two->add_option("--sync-steps", two_opts->cfg.sync_cfg.steps)->capture_default_str();
  two->add_option("--async-steps", two_opts->cfg.async_cfg.steps)->capture_default_str();
  two->add_option("--lr", two_opts->cfg.sync_cfg.lr)->capture_default_str();
  two->add_option("--async-lr", two_opts->cfg.async_cfg.lr)->capture_default_str();
  two->add_option("--async-mode", two_opts->async_mode, "fixed | randomized")->capture_default_str();
  two->add_option("--async-tau", two_opts->async_tau)->capture_default_str();
  two->set_config("--config");
  two->callback([two_opts] { run_two_stage(*two_opts); });

  auto rdd_opts = std::make_shared<RddOpts>();
  auto* rdd = app.add_subcommand("rdd", "relative duration difference table");
  rdd->add_option("--input", rdd_opts->input, "CSV with pair_id,L_f2s,L_s2f")->required();
  rdd->add_option("--out", rdd_opts->out, "output directory")->required();
  rdd->set_config("--config");
  rdd->callback([rdd_opts] { run_rdd(*rdd_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << std::endl;
    return 3;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 0;
}

}  // namespace rhythmkit::cli
