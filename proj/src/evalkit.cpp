// rhythmkit/evalkit.cpp

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

#include "rhythmkit/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rhythmkit/errors.hpp"

namespace rhythmkit {

double relative_duration_difference(int l_f2s, int l_s2f) {
  if (l_f2s < 1 || l_s2f < 1) throw ZeroLength("conversion lengths must be >= 1");
  return static_cast<double>(l_f2s - l_s2f) / static_cast<double>(l_s2f);
}

AlignmentEstimate wilson_estimate(int successes, int trials) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (successes < 0 || successes > trials) throw ConfigError("successes out of range");
  constexpr double kZ = 1.959963984540054;  // 97.5% normal quantile
  const double n = trials;
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ * kZ;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;

  AlignmentEstimate est;
  est.trials = trials;
  est.successes = successes;
  est.p_hat = p;
  // center - half is analytically 0 at p = 0 (and symmetrically at p = 1)
  // but rounds to a stray ulp; pin the endpoints.
  est.ci_lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  est.ci_hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return est;
}

AlignmentEstimate alignment_probability(const PairGenerator& pair_gen, const ResamplerFn& resampler,
                                        int trials, double tol, uint64_t seed) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (tol < 0.0) throw ConfigError("tol must be >= 0");
  int successes = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(trial)));
    const auto [a, b] = pair_gen(rng);
    const Eigen::MatrixXd za = resampler(a, rng);
    const Eigen::MatrixXd zb = resampler(b, rng);
    if (za.rows() != zb.rows() || za.cols() != zb.cols()) continue;
    const double diff = za.rows() == 0 ? 0.0 : (za - zb).cwiseAbs().maxCoeff();
    if (diff <= tol) ++successes;
  }
  return wilson_estimate(successes, trials);
}

namespace {

/// Majority ground-truth phone per non-empty segment, ties to the lower id.
std::vector<int> segment_labels(const SyntheticUtterance& utt, const Segmentation& seg) {
  if (seg.total_frames != utt.total_frames()) throw LengthMismatch("segmentation/utterance length differ");
  const std::vector<int> frame_phone = utt.frame_phone_index();
  std::vector<int> labels;
  for (const auto& s : seg.segments) {
    if (s.length() == 0) continue;
    std::map<int, int> votes;
    for (int t = s.begin; t < s.end; ++t) votes[utt.phones[static_cast<size_t>(frame_phone[static_cast<size_t>(t)])]]++;
    int best_phone = votes.begin()->first;
    int best_count = votes.begin()->second;
    for (const auto& [phone, count] : votes) {
      if (count > best_count) {
        best_phone = phone;
        best_count = count;
      }
    }
    labels.push_back(best_phone);
  }
  return labels;
}

size_t lcs_length(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<std::vector<size_t>> dp(a.size() + 1, std::vector<size_t>(b.size() + 1, 0));
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      dp[i][j] = a[i - 1] == b[j - 1] ? dp[i - 1][j - 1] + 1 : std::max(dp[i - 1][j], dp[i][j - 1]);
    }
  }
  return dp[a.size()][b.size()];
}

}  // namespace

double boundary_correspondence(const SyntheticUtterance& utt_a, const Segmentation& seg_a,
                               const SyntheticUtterance& utt_b, const Segmentation& seg_b) {
  if (utt_a.phones != utt_b.phones) throw ContentMismatch("utterances carry different phones");
  const std::vector<int> labels_a = segment_labels(utt_a, seg_a);
  const std::vector<int> labels_b = segment_labels(utt_b, seg_b);
  const double count_term = labels_a.size() == labels_b.size() ? 1.0 : 0.0;
  const size_t max_len = std::max(labels_a.size(), labels_b.size());
  const double lcs_term =
      max_len == 0 ? 1.0 : static_cast<double>(lcs_length(labels_a, labels_b)) / static_cast<double>(max_len);
  return 0.5 * count_term + 0.5 * lcs_term;
}

std::vector<SweepRow> length_vs_tau_sweep(const FrameSequence& utt, const GramMatrix& gram,
                                          std::vector<double> tau_values, UpsampleRule rule) {
  for (double tau : tau_values) {
    if (!(tau > 0.0) || !(tau < 2.0)) throw ConfigError("tau values must lie in (0, 2)");
  }
  std::sort(tau_values.begin(), tau_values.end());
  std::vector<SweepRow> rows;
  rows.reserve(tau_values.size());
  Rng unused(0);  // fixed mode consumes no randomness
  for (double tau : tau_values) {
    ThresholdParams params = ThresholdParams::fixed(tau);
    params.upsample_rule = rule;
    const ResampleResult result = resample(utt, gram, params, unused);
    rows.push_back({tau, static_cast<int>(result.codes.rows())});
  }
  return rows;
}

}  // namespace rhythmkit
