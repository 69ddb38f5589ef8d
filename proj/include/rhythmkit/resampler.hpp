// rhythmkit/resampler.hpp

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

#ifndef RHYTHMKIT_RESAMPLER_HPP_
#define RHYTHMKIT_RESAMPLER_HPP_

#include <string>
#include <vector>

#include "rhythmkit/feats.hpp"
#include "rhythmkit/rng.hpp"
#include "rhythmkit/simrep.hpp"

namespace rhythmkit {

enum class SegmentKind { kNormal, kInserted };

/// Half-open frame range [begin, end).  Inserted segments are empty
/// (begin == end) and exist only in the upsampling regime; they duplicate
/// the code at their left boundary when pooled and contribute no frames
/// when realigned.
struct Segment {
  int begin = 0;
  int end = 0;
  SegmentKind kind = SegmentKind::kNormal;

  int length() const { return end - begin; }
};

struct Segmentation {
  std::vector<Segment> segments;
  int total_frames = 0;

  int size() const { return static_cast<int>(segments.size()); }
  /// Boundary list t_1..t_{M+1} with t_1 = 0 and t_{M+1} = total_frames.
  std::vector<int> boundaries() const;
  /// One singleton segment per frame.
  static Segmentation singletons(int total_frames);
  void validate() const;
};

/// Insertion test used when tau(t) > 1.  kHighSimilarity duplicates where
/// the anchor similarity is at least 2 - tau (more insertion as tau grows
/// past 1, only at similar frames).  kPermissive uses threshold 1 - tau,
/// which for tau > 1 accepts almost any similarity value.
enum class UpsampleRule { kHighSimilarity, kPermissive };

/// Double-randomized threshold: a global draw G ~ U[u_l, u_r] shared by
/// the utterance, then per-frame levels L(t) ~ U[G +- local_halfwidth].
/// Levels at or below 1 are mapped through a windowed similarity quantile;
/// levels above 1 are used directly as tau (the upsampling magnitude).
struct ThresholdParams {
  enum class Mode { kRandomized, kFixed };

  double u_l = 0.7;
  double u_r = 1.1;
  double local_halfwidth = 0.05;
  int window_b = 20;
  Mode mode = Mode::kRandomized;
  double fixed_tau = 1.0;
  UpsampleRule upsample_rule = UpsampleRule::kHighSimilarity;

  static ThresholdParams randomized(double lo, double hi);
  static ThresholdParams fixed(double tau);
  void validate() const;
};

/// Raw threshold randomness for one utterance.
struct TauDraw {
  double global = 0.0;
  std::vector<double> levels;  // one per frame, no clamping
};

/// Draws G once and L(t) per frame.  Values may exceed 1 (upsampling) or
/// sit below 1 (downsampling).  Fixed mode consumes no randomness.
TauDraw draw_tau(Rng& rng, int total_frames, const ThresholdParams& params);

/// Linear-interpolation quantile (inclusive endpoints) of the gram row
/// around `anchor`: columns [anchor - b, anchor + b] clamped to the edge.
/// Levels above 1 pass through unchanged.
double tau_from_quantile(const GramMatrix& gram, int anchor, double level, int window_b);

struct SegmentationResult {
  Segmentation segmentation;
  std::vector<double> tau_trace;  // resolved tau per frame
  double global_draw = 0.0;
};

/// Sequential left-to-right segmentation scan.
///
/// With the current anchor t_m and candidate frame t:
///   tau(t) < 1  : boundary at t iff G(t_m, t') <= tau(t) for t' in
///                 {t, min(t+1, T-1)} (two-frame hysteresis);
///   tau(t) >= 1 : boundary always; additionally, when tau(t) > 1 an empty
///                 segment is inserted at t iff G(t_m, t) passes the
///                 upsample rule.
/// The final boundary T is always appended.
SegmentationResult segment(const GramMatrix& gram, const ThresholdParams& params, Rng& rng);

/// Deterministic core of segment(): same scan with the randomness supplied.
SegmentationResult segment_with_draw(const GramMatrix& gram, const ThresholdParams& params,
                                     const TauDraw& draw);

struct ResampleResult {
  Eigen::MatrixXd codes;  // M x d
  Segmentation segmentation;
  std::vector<double> tau_trace;
  double global_draw = 0.0;
};

/// Mean-pools each normal segment to one code; an inserted segment copies
/// the input row at its (empty) boundary.
ResampleResult pool(const FrameSequence& codes_in, const Segmentation& seg);

/// draw_tau -> segment -> pool.
ResampleResult resample(const FrameSequence& codes_in, const GramMatrix& gram,
                        const ThresholdParams& params, Rng& rng);

/// Expands codes back to the original frame count: each normal segment's
/// code is repeated for the segment length, inserted codes are dropped.
FrameSequence realign(const ResampleResult& result, double frame_period = 0.01);

/// Baseline: split into segments of random length, then linearly resample
/// each at an independent random rate.
struct RrConfig {
  int seg_len_min = 19;
  int seg_len_max = 32;
  double rate_min = 0.5;
  double rate_max = 1.5;

  void validate() const;
};

FrameSequence rr_baseline(const FrameSequence& codes_in, Rng& rng, const RrConfig& cfg = {});

/// Segmentation dump: `m,t_start,t_end,kind` rows.
void write_segmentation_csv(const std::string& path, const Segmentation& seg);
/// Threshold trace dump: `t,tau` rows.
void write_tau_trace_csv(const std::string& path, const std::vector<double>& tau_trace);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_RESAMPLER_HPP_
