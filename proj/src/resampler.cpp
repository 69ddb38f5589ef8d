// rhythmkit/resampler.cpp

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

#include "rhythmkit/resampler.hpp"

#include <algorithm>
#include <cmath>

#include "rhythmkit/csv.hpp"
#include "rhythmkit/errors.hpp"

namespace rhythmkit {

std::vector<int> Segmentation::boundaries() const {
  std::vector<int> bounds;
  bounds.reserve(segments.size() + 1);
  bounds.push_back(0);
  for (const auto& seg : segments) bounds.push_back(seg.end);
  return bounds;
}

Segmentation Segmentation::singletons(int total_frames) {
  Segmentation seg;
  seg.total_frames = total_frames;
  seg.segments.reserve(static_cast<size_t>(total_frames));
  for (int t = 0; t < total_frames; ++t) seg.segments.push_back({t, t + 1, SegmentKind::kNormal});
  return seg;
}

void Segmentation::validate() const {
  int at = 0;
  for (size_t m = 0; m < segments.size(); ++m) {
    const auto& seg = segments[m];
    if (seg.begin != at) throw LengthMismatch("segment begin out of order");
    if (seg.end < seg.begin) throw LengthMismatch("segment end before begin");
    if (seg.kind == SegmentKind::kInserted) {
      if (seg.end != seg.begin) throw LengthMismatch("inserted segment must be empty");
      if (m == 0) throw LengthMismatch("inserted segment cannot be first");
    } else if (seg.end == seg.begin) {
      throw LengthMismatch("normal segment cannot be empty");
    }
    at = seg.end;
  }
  if (at != total_frames) throw LengthMismatch("segments do not cover all frames");
}

ThresholdParams ThresholdParams::randomized(double lo, double hi) {
  ThresholdParams params;
  params.mode = Mode::kRandomized;
  params.u_l = lo;
  params.u_r = hi;
  params.validate();
  return params;
}

ThresholdParams ThresholdParams::fixed(double tau) {
  ThresholdParams params;
  params.mode = Mode::kFixed;
  params.fixed_tau = tau;
  return params;
}

void ThresholdParams::validate() const {
  if (!(u_l <= u_r)) throw ConfigError("need u_l <= u_r");
  if (u_l < 0.0 || u_r > 2.0) throw ConfigError("u_l/u_r must lie in [0, 2]");
  if (local_halfwidth < 0.0) throw ConfigError("local_halfwidth must be >= 0");
  if (window_b < 1) throw ConfigError("window_b must be >= 1");
}

TauDraw draw_tau(Rng& rng, int total_frames, const ThresholdParams& params) {
  if (total_frames < 0) throw ConfigError("negative frame count");
  TauDraw draw;
  if (params.mode == ThresholdParams::Mode::kFixed) {
    draw.global = params.fixed_tau;
    draw.levels.assign(static_cast<size_t>(total_frames), params.fixed_tau);
    return draw;
  }
  params.validate();
  draw.global = rng.uniform(params.u_l, params.u_r);
  draw.levels.resize(static_cast<size_t>(total_frames));
  for (int t = 0; t < total_frames; ++t) {
    draw.levels[static_cast<size_t>(t)] =
        rng.uniform(draw.global - params.local_halfwidth, draw.global + params.local_halfwidth);
  }
  return draw;
}

double tau_from_quantile(const GramMatrix& gram, int anchor, double level, int window_b) {
  const int t_len = static_cast<int>(gram.size());
  if (anchor < 0 || anchor >= t_len) throw ConfigError("anchor out of range");
  if (window_b < 1) throw ConfigError("window_b must be >= 1");
  if (level > 1.0) return level;  // quantile undefined above 1; keep the magnitude

  const int lo = std::max(0, anchor - window_b);
  const int hi = std::min(t_len - 1, anchor + window_b);
  std::vector<double> window;
  window.reserve(static_cast<size_t>(hi - lo + 1));
  for (int t = lo; t <= hi; ++t) window.push_back(gram.g(anchor, t));
  std::sort(window.begin(), window.end());

  const double clamped = std::max(level, 0.0);
  const double pos = clamped * static_cast<double>(window.size() - 1);
  const auto idx = static_cast<size_t>(pos);
  if (idx + 1 >= window.size()) return window.back();
  const double frac = pos - static_cast<double>(idx);
  return window[idx] + frac * (window[idx + 1] - window[idx]);
}

SegmentationResult segment_with_draw(const GramMatrix& gram, const ThresholdParams& params,
                                     const TauDraw& draw) {
  const int t_len = static_cast<int>(gram.size());
  if (t_len < 1) throw EmptyInput("segment needs at least one frame");
  if (static_cast<int>(draw.levels.size()) != t_len) throw LengthMismatch("one level per frame required");

  const bool fixed = params.mode == ThresholdParams::Mode::kFixed;
  auto resolve_tau = [&](int anchor, int t) {
    if (fixed) return params.fixed_tau;
    return tau_from_quantile(gram, anchor, draw.levels[static_cast<size_t>(t)], params.window_b);
  };
  auto insert_here = [&](int anchor, int t, double tau) {
    const double threshold = params.upsample_rule == UpsampleRule::kHighSimilarity ? 2.0 - tau : 1.0 - tau;
    return gram.g(anchor, t) >= threshold;
  };

  SegmentationResult result;
  result.global_draw = draw.global;
  result.tau_trace.resize(static_cast<size_t>(t_len));
  result.segmentation.total_frames = t_len;
  auto& segments = result.segmentation.segments;

  int anchor = 0;
  result.tau_trace[0] = resolve_tau(0, 0);
  for (int t = 1; t < t_len; ++t) {
    const double tau = resolve_tau(anchor, t);
    result.tau_trace[static_cast<size_t>(t)] = tau;
    if (tau >= 1.0) {
      segments.push_back({anchor, t, SegmentKind::kNormal});
      if (tau > 1.0 && insert_here(anchor, t, tau)) {
        segments.push_back({t, t, SegmentKind::kInserted});
      }
      anchor = t;
    } else {
      const int lookahead = std::min(t + 1, t_len - 1);
      if (gram.g(anchor, t) <= tau && gram.g(anchor, lookahead) <= tau) {
        segments.push_back({anchor, t, SegmentKind::kNormal});
        anchor = t;
      }
    }
  }
  segments.push_back({anchor, t_len, SegmentKind::kNormal});
  return result;
}

SegmentationResult segment(const GramMatrix& gram, const ThresholdParams& params, Rng& rng) {
  const TauDraw draw = draw_tau(rng, static_cast<int>(gram.size()), params);
  return segment_with_draw(gram, params, draw);
}

ResampleResult pool(const FrameSequence& codes_in, const Segmentation& seg) {
  if (seg.total_frames != static_cast<int>(codes_in.num_frames())) {
    throw LengthMismatch("segmentation does not match input length");
  }
  ResampleResult result;
  result.segmentation = seg;
  result.codes.resize(static_cast<Eigen::Index>(seg.segments.size()), codes_in.dim());
  for (size_t m = 0; m < seg.segments.size(); ++m) {
    const auto& s = seg.segments[m];
    const auto row = static_cast<Eigen::Index>(m);
    if (s.kind == SegmentKind::kInserted) {
      if (s.begin >= seg.total_frames) throw LengthMismatch("inserted segment at sequence end");
      result.codes.row(row) = codes_in.frames.row(s.begin);
    } else {
      result.codes.row(row) =
          codes_in.frames.middleRows(s.begin, s.length()).colwise().mean();
    }
  }
  return result;
}

ResampleResult resample(const FrameSequence& codes_in, const GramMatrix& gram,
                        const ThresholdParams& params, Rng& rng) {
  if (gram.size() != codes_in.num_frames()) throw LengthMismatch("gram does not match input length");
  SegmentationResult seg = segment(gram, params, rng);
  ResampleResult result = pool(codes_in, seg.segmentation);
  result.tau_trace = std::move(seg.tau_trace);
  result.global_draw = seg.global_draw;
  return result;
}

FrameSequence realign(const ResampleResult& result, double frame_period) {
  FrameSequence out;
  out.frame_period = frame_period;
  out.frames.resize(result.segmentation.total_frames, result.codes.cols());
  for (size_t m = 0; m < result.segmentation.segments.size(); ++m) {
    const auto& s = result.segmentation.segments[m];
    for (int t = s.begin; t < s.end; ++t) {
      out.frames.row(t) = result.codes.row(static_cast<Eigen::Index>(m));
    }
  }
  return out;
}

void RrConfig::validate() const {
  if (seg_len_min < 1 || seg_len_min > seg_len_max) throw ConfigError("need 1 <= seg_len_min <= seg_len_max");
  if (!(rate_min > 0.0) || !(rate_min <= rate_max)) throw ConfigError("need 0 < rate_min <= rate_max");
}

FrameSequence rr_baseline(const FrameSequence& codes_in, Rng& rng, const RrConfig& cfg) {
  cfg.validate();
  const int t_len = static_cast<int>(codes_in.num_frames());
  if (t_len < 1) throw EmptyInput("rr_baseline needs at least one frame");

  std::vector<Eigen::RowVectorXd> rows;
  rows.reserve(static_cast<size_t>(t_len));
  int pos = 0;
  while (pos < t_len) {
    const int drawn = rng.uniform_int(cfg.seg_len_min, cfg.seg_len_max);
    const int len = std::min(drawn, t_len - pos);  // last segment truncated
    const double rate = rng.uniform(cfg.rate_min, cfg.rate_max);
    const int out_len = std::max(1L, std::lround(static_cast<double>(len) / rate));
    for (int j = 0; j < out_len; ++j) {
      const double p = std::min(j * rate, static_cast<double>(len - 1));
      const auto i0 = static_cast<int>(p);
      const double frac = p - i0;
      if (frac == 0.0) {
        rows.emplace_back(codes_in.frames.row(pos + i0));
      } else {
        const int i1 = std::min(i0 + 1, len - 1);
        rows.emplace_back((1.0 - frac) * codes_in.frames.row(pos + i0) +
                          frac * codes_in.frames.row(pos + i1));
      }
    }
    pos += len;
  }

  FrameSequence out = codes_in;
  out.frames.resize(static_cast<Eigen::Index>(rows.size()), codes_in.dim());
  for (size_t i = 0; i < rows.size(); ++i) out.frames.row(static_cast<Eigen::Index>(i)) = rows[i];
  return out;
}

void write_segmentation_csv(const std::string& path, const Segmentation& seg) {
  CsvTable table;
  table.header = {"m", "t_start", "t_end", "kind"};
  for (size_t m = 0; m < seg.segments.size(); ++m) {
    const auto& s = seg.segments[m];
    table.rows.push_back({std::to_string(m), std::to_string(s.begin), std::to_string(s.end),
                          s.kind == SegmentKind::kInserted ? "inserted" : "normal"});
  }
  write_csv(path, table);
}

void write_tau_trace_csv(const std::string& path, const std::vector<double>& tau_trace) {
  CsvTable table;
  table.header = {"t", "tau"};
  for (size_t t = 0; t < tau_trace.size(); ++t) {
    table.rows.push_back({std::to_string(t), g9(tau_trace[t])});
  }
  write_csv(path, table);
}

}  // namespace rhythmkit
