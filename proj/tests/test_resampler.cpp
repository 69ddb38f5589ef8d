#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rhythmkit/errors.hpp"
#include "rhythmkit/resampler.hpp"
#include "rhythmkit/synthgen.hpp"

using namespace rhythmkit;

namespace {

FrameSequence random_rows(Eigen::Index r, Eigen::Index c, uint64_t seed) {
  Rng rng(seed);
  FrameSequence seq;
  seq.frames.resize(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) seq.frames(i, j) = rng.gaussian();
  return seq;
}

/// The four-frame toy similarity pattern: frames 1 and 2 nearly identical
/// (0.99), everything else dissimilar (0.1).
GramMatrix toy_gram() {
  GramMatrix gm;
  gm.g.resize(4, 4);
  gm.g << 1.0, 0.1, 0.1, 0.1,
          0.1, 1.0, 0.99, 0.1,
          0.1, 0.99, 1.0, 0.1,
          0.1, 0.1, 0.1, 1.0;
  return gm;
}

// Quantile oracle written independently: sort and interpolate positions.
double quantile_oracle(std::vector<double> values, double level) {
  std::sort(values.begin(), values.end());
  const double pos = level * (static_cast<double>(values.size()) - 1.0);
  const auto lo = static_cast<size_t>(std::floor(pos));
  const auto hi = static_cast<size_t>(std::ceil(pos));
  const double frac = pos - std::floor(pos);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace

TEST_CASE("draw_tau") {
  SUBCASE("degenerate intervals give a constant trace") {
    ThresholdParams params = ThresholdParams::randomized(0.8, 0.8);
    params.local_halfwidth = 0.0;
    Rng rng(0);
    const TauDraw draw = draw_tau(rng, 5, params);
    CHECK(draw.global == doctest::Approx(0.8).epsilon(1e-12));
    for (double level : draw.levels) CHECK(level == doctest::Approx(0.8).epsilon(1e-12));
  }

  SUBCASE("global draw mean matches the uniform mean over 10^4 draws") {
    const ThresholdParams params = ThresholdParams::randomized(0.7, 1.1);
    Rng rng(42);
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) sum += draw_tau(rng, 1, params).global;
    CHECK(sum / 10000.0 == doctest::Approx(0.9).epsilon(0.0223));  // 0.9 +- 0.02
  }

  SUBCASE("levels stay within the local halfwidth of the global draw") {
    const ThresholdParams params = ThresholdParams::randomized(0.7, 1.1);
    Rng rng(3);
    const TauDraw draw = draw_tau(rng, 200, params);
    for (double level : draw.levels) {
      CHECK(level >= draw.global - 0.05 - 1e-12);
      CHECK(level <= draw.global + 0.05 + 1e-12);
    }
  }

  SUBCASE("identical seeds give identical traces") {
    const ThresholdParams params = ThresholdParams::randomized(0.7, 1.1);
    Rng a(9), b(9);
    const TauDraw da = draw_tau(a, 50, params);
    const TauDraw db = draw_tau(b, 50, params);
    CHECK(da.global == db.global);
    CHECK(da.levels == db.levels);
  }
}

TEST_CASE("tau_from_quantile") {
  SUBCASE("two-point window midpoint") {
    GramMatrix gm;
    gm.g.resize(2, 2);
    gm.g << 1.0, 0.0, 0.0, 1.0;
    // Window around anchor 0 holds {1, 0}; the 0.5-quantile is 0.5.
    CHECK(tau_from_quantile(gm, 0, 0.5, 20) == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("levels 0 and 1 hit the window extremes") {
    const FrameSequence seq = random_rows(30, 6, 5);
    const GramMatrix gm = gram(seq);
    std::vector<double> window;
    for (int t = 0; t <= std::min(29, 10 + 20); ++t) window.push_back(gm.g(10, t));
    const double lo = *std::min_element(window.begin(), window.end());
    const double hi = *std::max_element(window.begin(), window.end());
    CHECK(tau_from_quantile(gm, 10, 0.0, 20) == doctest::Approx(lo).epsilon(1e-12));
    CHECK(tau_from_quantile(gm, 10, 1.0, 20) == doctest::Approx(hi).epsilon(1e-12));
  }

  SUBCASE("levels above 1 pass through") {
    const GramMatrix gm = toy_gram();
    CHECK(tau_from_quantile(gm, 1, 1.07, 20) == 1.07);
  }

  SUBCASE("41-value window matches the brute-force oracle") {
    const FrameSequence seq = random_rows(64, 8, 77);
    const GramMatrix gm = gram(seq);
    const int anchor = 30;
    std::vector<double> window;
    for (int t = anchor - 20; t <= anchor + 20; ++t) window.push_back(gm.g(anchor, t));
    REQUIRE(window.size() == 41);
    for (double level : {0.25, 0.1, 0.5, 0.665, 0.99}) {
      CHECK(tau_from_quantile(gm, anchor, level, 20) ==
            doctest::Approx(quantile_oracle(window, level)).epsilon(1e-12));
    }
  }
}

TEST_CASE("segment") {
  SUBCASE("fixed tau 1 segments every frame, no insertions") {
    for (uint64_t seed = 0; seed < 5; ++seed) {
      const FrameSequence seq = random_rows(20, 4, seed);
      Rng rng(seed);
      const SegmentationResult result = segment(gram(seq), ThresholdParams::fixed(1.0), rng);
      CHECK(result.segmentation.size() == 20);
      for (const auto& s : result.segmentation.segments) {
        CHECK(s.kind == SegmentKind::kNormal);
        CHECK(s.length() == 1);
      }
    }
  }

  SUBCASE("four-frame downsampling example: three segments {0},{1,2},{3}") {
    Rng rng(0);
    const SegmentationResult result = segment(toy_gram(), ThresholdParams::fixed(0.5), rng);
    result.segmentation.validate();
    REQUIRE(result.segmentation.size() == 3);
    CHECK(result.segmentation.segments[0].begin == 0);
    CHECK(result.segmentation.segments[0].end == 1);
    CHECK(result.segmentation.segments[1].begin == 1);
    CHECK(result.segmentation.segments[1].end == 3);
    CHECK(result.segmentation.segments[2].begin == 3);
    CHECK(result.segmentation.segments[2].end == 4);
  }

  SUBCASE("four-frame upsampling example: five segments with one insertion") {
    Rng rng(0);
    const SegmentationResult result = segment(toy_gram(), ThresholdParams::fixed(1.05), rng);
    result.segmentation.validate();
    REQUIRE(result.segmentation.size() == 5);
    int inserted = 0;
    for (const auto& s : result.segmentation.segments) {
      if (s.kind == SegmentKind::kInserted) {
        ++inserted;
        CHECK(s.begin == 2);  // after the similar pair (1, 2)
        CHECK(s.end == 2);
      } else {
        CHECK(s.length() == 1);
      }
    }
    CHECK(inserted == 1);
    CHECK(result.segmentation.segments[2].kind == SegmentKind::kInserted);
  }

  SUBCASE("permissive rule inserts at every upsampled frame of the toy gram") {
    Rng rng(0);
    ThresholdParams params = ThresholdParams::fixed(1.05);
    params.upsample_rule = UpsampleRule::kPermissive;
    const SegmentationResult result = segment(toy_gram(), params, rng);
    // threshold 1 - 1.05 < -1 <= every similarity value
    CHECK(result.segmentation.size() == 7);
  }

  SUBCASE("single frame yields one segment") {
    const FrameSequence seq = random_rows(1, 3, 0);
    Rng rng(0);
    const SegmentationResult result = segment(gram(seq), ThresholdParams::fixed(0.5), rng);
    CHECK(result.segmentation.size() == 1);
    CHECK(result.segmentation.segments[0].length() == 1);
  }
}

TEST_CASE("pool") {
  SUBCASE("singleton segmentation copies the input bit-exactly") {
    const FrameSequence seq = random_rows(12, 5, 3);
    const ResampleResult result = pool(seq, Segmentation::singletons(12));
    CHECK(result.codes.rows() == 12);
    CHECK((result.codes - seq.frames).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("two rows average") {
    FrameSequence seq;
    seq.frames.resize(2, 1);
    seq.frames << 0.0, 2.0;
    Segmentation seg;
    seg.total_frames = 2;
    seg.segments.push_back({0, 2, SegmentKind::kNormal});
    const ResampleResult result = pool(seq, seg);
    CHECK(result.codes(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  }

  SUBCASE("upsampling toy: five codes, fourth equals third") {
    const FrameSequence seq = random_rows(4, 6, 9);
    Rng rng(0);
    const SegmentationResult segres = segment(toy_gram(), ThresholdParams::fixed(1.05), rng);
    const ResampleResult result = pool(seq, segres.segmentation);
    REQUIRE(result.codes.rows() == 5);
    // codes: f0, f1, inserted copy of row 2, f2, f3
    CHECK((result.codes.row(2) - result.codes.row(3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((result.codes.row(0) - seq.frames.row(0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((result.codes.row(4) - seq.frames.row(3)).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("length mismatch throws") {
    const FrameSequence seq = random_rows(5, 2, 1);
    CHECK_THROWS_AS(pool(seq, Segmentation::singletons(4)), LengthMismatch);
  }

  SUBCASE("brute-force mean oracle over randomized segmentations") {
    for (uint64_t seed = 0; seed < 100; ++seed) {
      const FrameSequence seq = random_rows(40, 3, seed);
      Rng rng(seed);
      const ResampleResult result =
          resample(seq, gram(seq), ThresholdParams::randomized(0.7, 1.1), rng);
      for (size_t m = 0; m < result.segmentation.segments.size(); ++m) {
        const auto& s = result.segmentation.segments[m];
        if (s.kind == SegmentKind::kInserted) {
          CHECK((result.codes.row(static_cast<Eigen::Index>(m)) - seq.frames.row(s.begin))
                    .cwiseAbs()
                    .maxCoeff() == 0.0);
          continue;
        }
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(seq.dim());
        for (int t = s.begin; t < s.end; ++t) mean += seq.frames.row(t);
        mean /= s.length();
        CHECK((result.codes.row(static_cast<Eigen::Index>(m)) - mean).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}

TEST_CASE("resample") {
  SUBCASE("fixed tau 1 is the identity, bit-exact") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      Rng size_rng(seed);
      const auto t_len = static_cast<Eigen::Index>(size_rng.uniform_int(1, 60));
      const auto dim = static_cast<Eigen::Index>(size_rng.uniform_int(1, 8));
      const FrameSequence seq = random_rows(t_len, dim, seed + 1000);
      Rng rng(seed);
      const ResampleResult result = resample(seq, gram(seq), ThresholdParams::fixed(1.0), rng);
      REQUIRE(result.codes.rows() == seq.num_frames());
      CHECK((result.codes - seq.frames).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SUBCASE("fixed tau 0.5 on a clean utterance recovers the phones") {
    Rng rng(4);
    const SyntheticUtterance utt = make_utterance(rng, 6, 5, 8, {1.0, 2.0, 0.0}, 3, 16);
    Rng rng2(0);
    const ResampleResult result =
        resample(utt.seq, gram(utt.seq), ThresholdParams::fixed(0.5), rng2);
    REQUIRE(result.codes.rows() == static_cast<Eigen::Index>(utt.phones.size()));
    for (size_t p = 0; p < utt.phones.size(); ++p) {
      const Eigen::VectorXd proto = phone_prototype(utt.phones[p], 16);
      CHECK((result.codes.row(static_cast<Eigen::Index>(p)) - proto.transpose())
                .cwiseAbs()
                .maxCoeff() < 1e-9);
    }
  }

  SUBCASE("randomized resampling is reproducible under the seed") {
    const FrameSequence seq = random_rows(50, 4, 8);
    const GramMatrix gm = gram(seq);
    Rng a(123), b(123);
    const ResampleResult ra = resample(seq, gm, ThresholdParams::randomized(0.7, 1.1), a);
    const ResampleResult rb = resample(seq, gm, ThresholdParams::randomized(0.7, 1.1), b);
    CHECK(ra.codes.rows() == rb.codes.rows());
    CHECK((ra.codes - rb.codes).cwiseAbs().maxCoeff() == 0.0);
    CHECK(ra.tau_trace == rb.tau_trace);
  }

  SUBCASE("segment count is monotone in a fixed threshold on clean utterances") {
    // On block-structured similarity (noise-free synthetic input) a lower
    // threshold merges at least as aggressively.  Arbitrary cosine
    // matrices can violate this because the anchors diverge, so the claim
    // is checked where the pipeline actually relies on it.
    for (uint64_t seed = 0; seed < 200; ++seed) {
      Rng data_rng(seed);
      const SyntheticUtterance utt = make_utterance(data_rng, 6, 4, 8, {1.0, 2.0, 0.0}, 3, 16);
      const GramMatrix gm = gram(utt.seq);
      Rng pick(seed);
      double tau1 = pick.uniform(0.05, 1.0);
      double tau2 = pick.uniform(0.05, 1.0);
      if (tau1 > tau2) std::swap(tau1, tau2);
      Rng r1(0), r2(0);
      const auto m1 = segment(gm, ThresholdParams::fixed(tau1), r1).segmentation.size();
      const auto m2 = segment(gm, ThresholdParams::fixed(tau2), r2).segmentation.size();
      CHECK(m1 <= m2);
    }
  }
}

TEST_CASE("realign") {
  SUBCASE("identity at tau 1") {
    const FrameSequence seq = random_rows(15, 3, 2);
    Rng rng(0);
    const ResampleResult result = resample(seq, gram(seq), ThresholdParams::fixed(1.0), rng);
    const FrameSequence out = realign(result);
    CHECK((out.frames - seq.frames).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("codes repeat to the original segment lengths") {
    FrameSequence seq;
    seq.frames.resize(4, 1);
    seq.frames << 10.0, 20.0, 30.0, 40.0;
    Segmentation seg;
    seg.total_frames = 4;
    seg.segments.push_back({0, 1, SegmentKind::kNormal});
    seg.segments.push_back({1, 3, SegmentKind::kNormal});
    seg.segments.push_back({3, 4, SegmentKind::kNormal});
    const FrameSequence out = realign(pool(seq, seg));
    REQUIRE(out.num_frames() == 4);
    CHECK(out.frames(0, 0) == 10.0);
    CHECK(out.frames(1, 0) == 25.0);
    CHECK(out.frames(2, 0) == 25.0);
    CHECK(out.frames(3, 0) == 40.0);
  }

  SUBCASE("inserted codes are deleted") {
    const FrameSequence seq = random_rows(4, 2, 6);
    Rng rng(0);
    const SegmentationResult segres = segment(toy_gram(), ThresholdParams::fixed(1.05), rng);
    const FrameSequence out = realign(pool(seq, segres.segmentation));
    REQUIRE(out.num_frames() == 4);
    CHECK((out.frames - seq.frames).cwiseAbs().maxCoeff() == 0.0);  // all singletons here
  }

  SUBCASE("length preserved for every seed on a 200-frame input") {
    const FrameSequence seq = random_rows(200, 4, 31);
    const GramMatrix gm = gram(seq);
    for (uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng(seed);
      const ResampleResult result = resample(seq, gm, ThresholdParams::randomized(0.7, 1.1), rng);
      CHECK(realign(result).num_frames() == 200);
    }
  }
}

TEST_CASE("rr_baseline") {
  SUBCASE("rate range [1,1] is the identity") {
    const FrameSequence seq = random_rows(30, 3, 1);
    RrConfig cfg;
    cfg.rate_min = cfg.rate_max = 1.0;
    Rng rng(5);
    const FrameSequence out = rr_baseline(seq, rng, cfg);
    REQUIRE(out.num_frames() == 30);
    CHECK((out.frames - seq.frames).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("single segment at rate 2 keeps positions 0 and 2") {
    FrameSequence seq;
    seq.frames.resize(4, 1);
    seq.frames << 0.0, 1.0, 2.0, 3.0;
    RrConfig cfg;  // seg_len_min 19 covers the whole input
    cfg.rate_min = cfg.rate_max = 2.0;
    Rng rng(0);
    const FrameSequence out = rr_baseline(seq, rng, cfg);
    REQUIRE(out.num_frames() == 2);
    CHECK(out.frames(0, 0) == 0.0);
    CHECK(out.frames(1, 0) == 2.0);
  }

  SUBCASE("rate 0.5 doubles the length up to rounding per segment") {
    const FrameSequence seq = random_rows(64, 2, 3);
    RrConfig cfg;
    cfg.rate_min = cfg.rate_max = 0.5;
    Rng rng(7);
    const FrameSequence out = rr_baseline(seq, rng, cfg);
    const int n_segments = (64 + cfg.seg_len_min - 1) / cfg.seg_len_min;
    CHECK(std::abs(static_cast<int>(out.num_frames()) - 128) <= n_segments);
  }

  SUBCASE("invalid config throws") {
    const FrameSequence seq = random_rows(5, 2, 4);
    RrConfig cfg;
    cfg.rate_min = 0.0;
    Rng rng(0);
    CHECK_THROWS_AS(rr_baseline(seq, rng, cfg), ConfigError);
  }
}

TEST_CASE("alignment contrast on disproportional pairs") {
  // Zero-noise parallel pairs with disproportional stretching: the
  // similarity scan lands on phone boundaries for both utterances, so the
  // pooled codes agree exactly; random resampling essentially never aligns.
  const std::vector<int> phones{1, 2, 3, 0, 5, 2};
  int similarity_hits = 0;
  int rr_hits = 0;
  const int trials = 50;
  for (uint64_t seed = 0; seed < trials; ++seed) {
    Rng rng(seed);
    const auto [a, b] = parallel_pair(rng, phones, {1.0, 1.0, 0.0}, {1.5, 3.0, 0.0}, 3, 16);
    Rng ra(seed + 1), rb(seed + 2);
    const ResampleResult za = resample(a.seq, gram(a.seq), ThresholdParams::fixed(0.5), ra);
    const ResampleResult zb = resample(b.seq, gram(b.seq), ThresholdParams::fixed(0.5), rb);
    if (za.codes.rows() == zb.codes.rows() &&
        (za.codes - zb.codes).cwiseAbs().maxCoeff() <= 1e-9) {
      ++similarity_hits;
    }
    const FrameSequence qa = rr_baseline(a.seq, ra);
    const FrameSequence qb = rr_baseline(b.seq, rb);
    if (qa.num_frames() == qb.num_frames() &&
        (qa.frames - qb.frames).cwiseAbs().maxCoeff() <= 1e-9) {
      ++rr_hits;
    }
  }
  CHECK(similarity_hits == trials);
  CHECK(rr_hits == 0);
}
