// rhythmkit/infotheory.cpp

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

#include "rhythmkit/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "rhythmkit/errors.hpp"
#include "rhythmkit/synthgen.hpp"

namespace rhythmkit {

namespace {

constexpr double kMiTolerance = 1e-9;

/// Accumulates (row, col, prob) triples into a JointPmf, preserving first
/// appearance order of the keys, then normalizes by the exact total.
class JointBuilder {
 public:
  void add(const std::string& row, const std::string& col, double prob) {
    if (prob <= 0.0) return;
    const size_t r = index(row_index_, rows_, row);
    const size_t c = index(col_index_, cols_, col);
    cells_[{r, c}] += prob;
  }

  JointPmf build() const {
    JointPmf joint;
    joint.row_support = rows_;
    joint.col_support = cols_;
    joint.p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_.size()),
                                    static_cast<Eigen::Index>(cols_.size()));
    double total = 0.0;
    for (const auto& [rc, prob] : cells_) {
      joint.p(static_cast<Eigen::Index>(rc.first), static_cast<Eigen::Index>(rc.second)) = prob;
      total += prob;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidPmf("joint probabilities sum to " + std::to_string(total));
    joint.p /= total;
    return joint;
  }

 private:
  static size_t index(std::map<std::string, size_t>& index_map, std::vector<std::string>& names,
                      const std::string& key) {
    auto it = index_map.find(key);
    if (it != index_map.end()) return it->second;
    const size_t id = names.size();
    names.push_back(key);
    index_map.emplace(key, id);
    return id;
  }

  std::map<std::string, size_t> row_index_, col_index_;
  std::vector<std::string> rows_, cols_;
  std::map<std::pair<size_t, size_t>, double> cells_;
};

void check_outcome_dist(const OutcomeDist& dist) {
  if (dist.outcomes.size() != dist.probs.size()) throw InvalidPmf("channel row: size mismatch");
  double total = 0.0;
  for (double p : dist.probs) {
    if (p < -1e-15) throw InvalidPmf("channel row: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidPmf("channel row does not sum to 1");
}

/// Probability that two independent channel draws coincide.
double collision_probability(const OutcomeDist& a, const OutcomeDist& b) {
  std::map<std::string, double> probs_a;
  for (size_t i = 0; i < a.outcomes.size(); ++i) probs_a[seq_key(a.outcomes[i])] += a.probs[i];
  double collision = 0.0;
  for (size_t i = 0; i < b.outcomes.size(); ++i) {
    auto it = probs_a.find(seq_key(b.outcomes[i]));
    if (it != probs_a.end()) collision += it->second * b.probs[i];
  }
  return collision;
}

void check_content_preserved(const DiscreteEnsemble& ens) {
  const double i_s_z = mutual_information(joint_s_z(ens));
  const double i_s_x = mutual_information(joint_s_x(ens));
  if (std::abs(i_s_z - i_s_x) > kMiTolerance) {
    throw HypothesisViolated("channel does not preserve content: I(S;Z)=" + std::to_string(i_s_z) +
                             " vs I(S;X)=" + std::to_string(i_s_x));
  }
}

}  // namespace

std::string seq_key(const Seq& seq) {
  std::string key;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i) key += '.';
    key += std::to_string(seq[i]);
  }
  return key;
}

void DiscretePmf::validate() const {
  if (support.size() != probs.size()) throw InvalidPmf("support/probs size mismatch");
  double total = 0.0;
  for (double p : probs) {
    if (p < -1e-15) throw InvalidPmf("negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidPmf("probabilities sum to " + std::to_string(total));
}

double entropy(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p < -1e-15) throw InvalidPmf("negative probability");
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double entropy(const DiscretePmf& pmf) {
  pmf.validate();
  return entropy(pmf.probs);
}

DiscretePmf JointPmf::row_marginal() const {
  DiscretePmf pmf;
  pmf.support = row_support;
  const Eigen::VectorXd sums = p.rowwise().sum();
  pmf.probs.assign(sums.data(), sums.data() + sums.size());
  return pmf;
}

DiscretePmf JointPmf::col_marginal() const {
  DiscretePmf pmf;
  pmf.support = col_support;
  const Eigen::VectorXd sums = p.colwise().sum().transpose();
  pmf.probs.assign(sums.data(), sums.data() + sums.size());
  return pmf;
}

void JointPmf::validate() const {
  if (p.rows() != static_cast<Eigen::Index>(row_support.size()) ||
      p.cols() != static_cast<Eigen::Index>(col_support.size())) {
    throw InvalidPmf("joint support/matrix shape mismatch");
  }
  if ((p.array() < -1e-15).any()) throw InvalidPmf("negative joint probability");
  if (std::abs(p.sum() - 1.0) > 1e-12) throw InvalidPmf("joint does not sum to 1");
}

double mutual_information(const JointPmf& joint) {
  joint.validate();
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(joint.p.size()));
  for (Eigen::Index r = 0; r < joint.p.rows(); ++r) {
    for (Eigen::Index c = 0; c < joint.p.cols(); ++c) flat.push_back(joint.p(r, c));
  }
  const double mi = entropy(joint.row_marginal().probs) + entropy(joint.col_marginal().probs) - entropy(flat);
  if (mi < -1e-10) throw NumericalError("mutual information negative: " + std::to_string(mi));
  return std::max(0.0, mi);
}

Seq repeat_expand(const Seq& s, const Seq& r) {
  if (s.size() != r.size()) throw LengthMismatch("emit: S and R length differ");
  Seq x;
  for (size_t i = 0; i < s.size(); ++i) {
    if (r[i] < 1) throw ConfigError("repetition counts must be >= 1");
    for (int k = 0; k < r[i]; ++k) x.push_back(s[i]);
  }
  return x;
}

Seq collapse_runs(const Seq& x) {
  Seq s;
  for (size_t i = 0; i < x.size(); ++i) {
    if (s.empty() || s.back() != x[i]) s.push_back(x[i]);
  }
  return s;
}

void DiscreteEnsemble::validate() const {
  if (joint_sr.empty()) throw InvalidPmf("empty ensemble");
  if (!channel) throw ConfigError("ensemble has no channel");
  double total = 0.0;
  std::set<std::string> xs;
  std::set<std::string> pairs;
  for (const auto& entry : joint_sr) {
    if (entry.prob < -1e-15) throw InvalidPmf("negative joint probability");
    total += entry.prob;
    if (!pairs.insert(seq_key(entry.s) + "|" + seq_key(entry.r)).second) {
      throw InvalidPmf("duplicate (S, R) support pair");
    }
    if (!xs.insert(seq_key(emit(entry.s, entry.r))).second) {
      throw InvalidPmf("emit not injective: two (S, R) pairs share one X");
    }
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidPmf("ensemble probabilities sum to " + std::to_string(total));
}

JointPmf joint_r_z(const DiscreteEnsemble& ens) {
  ens.validate();
  JointBuilder builder;
  for (const auto& entry : ens.joint_sr) {
    const OutcomeDist dist = ens.channel(ens.emit(entry.s, entry.r));
    check_outcome_dist(dist);
    for (size_t i = 0; i < dist.outcomes.size(); ++i) {
      builder.add(seq_key(entry.r), seq_key(dist.outcomes[i]), entry.prob * dist.probs[i]);
    }
  }
  return builder.build();
}

JointPmf joint_r_x(const DiscreteEnsemble& ens) {
  ens.validate();
  JointBuilder builder;
  for (const auto& entry : ens.joint_sr) {
    builder.add(seq_key(entry.r), seq_key(ens.emit(entry.s, entry.r)), entry.prob);
  }
  return builder.build();
}

JointPmf joint_r_s(const DiscreteEnsemble& ens) {
  ens.validate();
  JointBuilder builder;
  for (const auto& entry : ens.joint_sr) builder.add(seq_key(entry.r), seq_key(entry.s), entry.prob);
  return builder.build();
}

JointPmf joint_s_z(const DiscreteEnsemble& ens) {
  ens.validate();
  JointBuilder builder;
  for (const auto& entry : ens.joint_sr) {
    const OutcomeDist dist = ens.channel(ens.emit(entry.s, entry.r));
    check_outcome_dist(dist);
    for (size_t i = 0; i < dist.outcomes.size(); ++i) {
      builder.add(seq_key(entry.s), seq_key(dist.outcomes[i]), entry.prob * dist.probs[i]);
    }
  }
  return builder.build();
}

JointPmf joint_s_x(const DiscreteEnsemble& ens) {
  ens.validate();
  JointBuilder builder;
  for (const auto& entry : ens.joint_sr) {
    builder.add(seq_key(entry.s), seq_key(ens.emit(entry.s, entry.r)), entry.prob);
  }
  return builder.build();
}

TheoremReport verify_theorem1(const DiscreteEnsemble& ens) {
  ens.validate();
  for (size_t i = 0; i < ens.joint_sr.size(); ++i) {
    for (size_t j = i + 1; j < ens.joint_sr.size(); ++j) {
      const auto& a = ens.joint_sr[i];
      const auto& b = ens.joint_sr[j];
      if (a.s != b.s || a.r == b.r) continue;
      const double collision = collision_probability(ens.channel(ens.emit(a.s, a.r)),
                                                     ens.channel(ens.emit(b.s, b.r)));
      if (collision > 0.0) {
        throw HypothesisViolated("same-S pair collides at the output: S=" + seq_key(a.s) +
                                 " R=" + seq_key(a.r) + " R'=" + seq_key(b.r));
      }
    }
  }
  check_content_preserved(ens);

  TheoremReport report;
  report.lhs = mutual_information(joint_r_z(ens));
  report.rhs = mutual_information(joint_r_x(ens));
  report.pass = std::abs(report.lhs - report.rhs) < kMiTolerance;
  return report;
}

TheoremReport verify_theorem2(const DiscreteEnsemble& ens) {
  ens.validate();
  std::map<std::string, std::string> constant_output;
  for (const auto& entry : ens.joint_sr) {
    const OutcomeDist dist = ens.channel(ens.emit(entry.s, entry.r));
    check_outcome_dist(dist);
    // Deterministic row: exactly one outcome carrying all the mass.
    bool have_outcome = false;
    std::string outcome;
    for (size_t i = 0; i < dist.outcomes.size(); ++i) {
      if (dist.probs[i] < 1e-12) continue;
      const std::string key = seq_key(dist.outcomes[i]);
      if (have_outcome && key != outcome) {
        throw HypothesisViolated("channel is stochastic for S=" + seq_key(entry.s) +
                                 " R=" + seq_key(entry.r));
      }
      outcome = key;
      have_outcome = true;
    }
    if (!have_outcome) throw InvalidPmf("channel row carries no mass");
    auto [it, fresh] = constant_output.emplace(seq_key(entry.s), outcome);
    if (!fresh && it->second != outcome) {
      throw HypothesisViolated("output not constant within S=" + seq_key(entry.s) +
                               ": saw " + it->second + " and " + outcome);
    }
  }
  check_content_preserved(ens);

  TheoremReport report;
  report.lhs = mutual_information(joint_r_z(ens));
  report.rhs = mutual_information(joint_r_s(ens));
  report.pass = std::abs(report.lhs - report.rhs) < kMiTolerance;
  return report;
}

namespace {

/// Random joint support over (S, R): a few distinct phone sequences, each
/// with a few distinct repetition vectors, and normalized random weights.
std::vector<DiscreteEnsemble::Entry> random_joint_support(Rng& rng) {
  const int alphabet = rng.uniform_int(2, 3);
  const int n_s = rng.uniform_int(2, 3);
  std::vector<Seq> s_values;
  std::set<std::string> seen_s;
  while (static_cast<int>(s_values.size()) < n_s) {
    const Seq s = sample_phones(rng, alphabet, 1, 3);
    if (seen_s.insert(seq_key(s)).second) s_values.push_back(s);
  }

  std::vector<DiscreteEnsemble::Entry> entries;
  double total = 0.0;
  for (const Seq& s : s_values) {
    const int n_r = rng.uniform_int(2, 3);
    std::set<std::string> seen_r;
    int guard = 0;
    while (static_cast<int>(seen_r.size()) < n_r && guard++ < 64) {
      Seq r(s.size());
      for (auto& rep : r) rep = rng.uniform_int(1, 3);
      if (!seen_r.insert(seq_key(r)).second) continue;
      DiscreteEnsemble::Entry entry;
      entry.s = s;
      entry.r = r;
      entry.prob = rng.uniform(0.2, 1.0);
      total += entry.prob;
      entries.push_back(std::move(entry));
    }
  }
  for (auto& entry : entries) entry.prob /= total;
  return entries;
}

Channel table_channel(std::map<std::string, OutcomeDist> table) {
  return [table = std::move(table)](const Seq& x) {
    auto it = table.find(seq_key(x));
    if (it == table.end()) throw ConfigError("channel has no row for input " + seq_key(x));
    return it->second;
  };
}

}  // namespace

DiscreteEnsemble random_split_ensemble(Rng& rng) {
  DiscreteEnsemble ens;
  ens.joint_sr = random_joint_support(rng);
  std::map<std::string, OutcomeDist> table;
  int next_token = 0;
  for (const auto& entry : ens.joint_sr) {
    const Seq x = repeat_expand(entry.s, entry.r);
    OutcomeDist dist;
    const int n_out = rng.uniform_int(1, 3);
    double total = 0.0;
    for (int i = 0; i < n_out; ++i) {
      dist.outcomes.push_back({next_token++});
      dist.probs.push_back(rng.uniform(0.2, 1.0));
      total += dist.probs.back();
    }
    for (auto& p : dist.probs) p /= total;
    table.emplace(seq_key(x), std::move(dist));
  }
  ens.channel = table_channel(std::move(table));
  return ens;
}

DiscreteEnsemble random_collapse_ensemble(Rng& rng) {
  DiscreteEnsemble ens;
  ens.joint_sr = random_joint_support(rng);
  ens.channel = [](const Seq& x) {
    OutcomeDist dist;
    dist.outcomes.push_back(collapse_runs(x));
    dist.probs.push_back(1.0);
    return dist;
  };
  return ens;
}

DiscreteEnsemble random_noisy_ensemble(Rng& rng) {
  DiscreteEnsemble ens;
  ens.joint_sr = random_joint_support(rng);
  const int pool = rng.uniform_int(2, 5);
  std::map<std::string, OutcomeDist> table;
  for (const auto& entry : ens.joint_sr) {
    const Seq x = repeat_expand(entry.s, entry.r);
    if (table.count(seq_key(x))) continue;
    OutcomeDist dist;
    double total = 0.0;
    for (int token = 0; token < pool; ++token) {
      dist.outcomes.push_back({token});
      dist.probs.push_back(rng.uniform(0.05, 1.0));
      total += dist.probs.back();
    }
    for (auto& p : dist.probs) p /= total;
    table.emplace(seq_key(x), std::move(dist));
  }
  ens.channel = table_channel(std::move(table));
  return ens;
}

Seq quantize_to_prototypes(const Eigen::MatrixXd& codes, int alphabet, int dim) {
  if (alphabet < 1) throw ConfigError("alphabet must be >= 1");
  Eigen::MatrixXd protos(alphabet, dim);
  for (int id = 0; id < alphabet; ++id) protos.row(id) = phone_prototype(id, dim).transpose();
  Seq out;
  out.reserve(static_cast<size_t>(codes.rows()));
  for (Eigen::Index t = 0; t < codes.rows(); ++t) {
    const double norm = codes.row(t).norm();
    int best = 0;
    double best_cos = -2.0;
    for (int id = 0; id < alphabet; ++id) {
      const double cosine = norm < 1e-12 ? 0.0 : codes.row(t).dot(protos.row(id)) / norm;
      if (cosine > best_cos + 1e-15) {
        best_cos = cosine;
        best = id;
      }
    }
    out.push_back(best);
  }
  return out;
}

EmpiricalChannel estimate_channel(const std::vector<Seq>& inputs, const EmpiricalChannelConfig& cfg) {
  if (!cfg.resampler) throw ConfigError("no resampler configured");
  if (cfg.samples_per_input < 1) throw ConfigError("samples_per_input must be >= 1");
  int alphabet = cfg.alphabet;
  if (alphabet == 0) {
    for (const Seq& x : inputs)
      for (int sym : x) alphabet = std::max(alphabet, sym + 1);
  }

  EmpiricalChannel channel;
  channel.inputs = inputs;
  channel.samples_per_input = cfg.samples_per_input;
  channel.counts.resize(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    const Seq& x = inputs[i];
    FrameSequence seq;
    seq.frames.resize(static_cast<Eigen::Index>(x.size()), cfg.dim);
    for (size_t t = 0; t < x.size(); ++t) {
      seq.frames.row(static_cast<Eigen::Index>(t)) = phone_prototype(x[t], cfg.dim).transpose();
    }
    std::map<Seq, int> counts;
    for (int k = 0; k < cfg.samples_per_input; ++k) {
      Rng trial(derive_seed(derive_seed(cfg.seed, i), static_cast<uint64_t>(k)));
      const Eigen::MatrixXd codes = cfg.resampler(seq, trial);
      counts[quantize_to_prototypes(codes, alphabet, cfg.dim)] += 1;
    }
    channel.counts[i].assign(counts.begin(), counts.end());
  }
  return channel;
}

Channel EmpiricalChannel::as_channel() const {
  std::map<std::string, OutcomeDist> table;
  for (size_t i = 0; i < inputs.size(); ++i) {
    OutcomeDist dist;
    for (const auto& [outcome, count] : counts[i]) {
      dist.outcomes.push_back(outcome);
      dist.probs.push_back(static_cast<double>(count) / samples_per_input);
    }
    table.emplace(seq_key(inputs[i]), std::move(dist));
  }
  return table_channel(std::move(table));
}

}  // namespace rhythmkit
