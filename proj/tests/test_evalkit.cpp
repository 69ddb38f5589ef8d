#include <doctest.h>

#include <cmath>

#include "rhythmkit/errors.hpp"
#include "rhythmkit/evalkit.hpp"

using namespace rhythmkit;

namespace {

PairGenerator disproportional_pairs(int alphabet = 6, int dim = 16) {
  return [alphabet, dim](Rng& rng) {
    const std::vector<int> phones = sample_phones(rng, alphabet, 4, 8);
    auto [a, b] = parallel_pair(rng, phones, {1.0, 1.0, 0.0}, {1.5, 3.0, 0.0}, 3, dim);
    return std::make_pair(std::move(a.seq), std::move(b.seq));
  };
}

ResamplerFn similarity_resampler(double tau) {
  return [tau](const FrameSequence& seq, Rng& rng) {
    return resample(seq, gram(seq), ThresholdParams::fixed(tau), rng).codes;
  };
}

}  // namespace

TEST_CASE("relative_duration_difference") {
  CHECK(relative_duration_difference(120, 100) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(relative_duration_difference(100, 100) == 0.0);
  CHECK(relative_duration_difference(90, 120) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK_THROWS_AS(relative_duration_difference(0, 100), ZeroLength);
  CHECK_THROWS_AS(relative_duration_difference(100, 0), ZeroLength);
}

TEST_CASE("wilson_estimate") {
  SUBCASE("zero successes in 10^4 trials bounds p below 0.001") {
    const AlignmentEstimate est = wilson_estimate(0, 10000);
    CHECK(est.p_hat == 0.0);
    CHECK(est.ci_hi < 0.001);
    CHECK(est.ci_lo == 0.0);
  }

  SUBCASE("full successes mirror it at 1") {
    const AlignmentEstimate est = wilson_estimate(10000, 10000);
    CHECK(est.p_hat == 1.0);
    CHECK(est.ci_lo > 0.999);
    CHECK(est.ci_hi == 1.0);
  }

  SUBCASE("interval contains the point estimate") {
    const AlignmentEstimate est = wilson_estimate(37, 200);
    CHECK(est.ci_lo < est.p_hat);
    CHECK(est.p_hat < est.ci_hi);
  }
}

TEST_CASE("alignment_probability") {
  SUBCASE("identity resampling never aligns different rhythms") {
    const ResamplerFn identity = [](const FrameSequence& seq, Rng&) { return seq.frames; };
    const AlignmentEstimate est =
        alignment_probability(disproportional_pairs(), identity, 300, 1e-9, 5);
    CHECK(est.successes == 0);
  }

  SUBCASE("similarity resampling at fixed 0.5 always aligns clean pairs") {
    const AlignmentEstimate est =
        alignment_probability(disproportional_pairs(), similarity_resampler(0.5), 300, 1e-9, 6);
    CHECK(est.successes == 300);
    CHECK(est.p_hat == 1.0);
  }

  SUBCASE("random resampling essentially never aligns") {
    const ResamplerFn rr = [](const FrameSequence& seq, Rng& rng) {
      return rr_baseline(seq, rng).frames;
    };
    const AlignmentEstimate est = alignment_probability(disproportional_pairs(), rr, 2000, 1e-9, 7);
    CHECK(est.successes == 0);
  }

  SUBCASE("estimates from independent runs agree within the interval (calibration)") {
    // Calibration of the estimator itself: identical pairs through a
    // coin-flip channel give a known interior success probability
    // (0.7^2 = 0.49).  A second, 20x larger run should fall inside the
    // first run's interval nearly always.  Seeded, so this is a frozen
    // regression.
    const PairGenerator identical_pairs = [](Rng& rng) {
      const std::vector<int> phones = sample_phones(rng, 4, 3, 5);
      const uint64_t render_seed = rng.draw_seed();
      Rng ra(render_seed), rb(render_seed);
      const auto reps = sample_rhythm(ra, phones, {1.0, 1.0, 0.0}, 3, 0.0);
      FrameSequence a = render(phones, reps, 8, 0.0, ra);
      FrameSequence b = render(phones, reps, 8, 0.0, rb);
      return std::make_pair(std::move(a), std::move(b));
    };
    const ResamplerFn coin_flip = [](const FrameSequence& seq, Rng& rng) {
      if (rng.uniform() < 0.7) return seq.frames;
      return (seq.frames.array() + 1.0).matrix().eval();
    };
    int covered = 0;
    for (uint64_t rep = 0; rep < 100; ++rep) {
      const AlignmentEstimate small =
          alignment_probability(identical_pairs, coin_flip, 150, 1e-9, 1000 + rep);
      const AlignmentEstimate big =
          alignment_probability(identical_pairs, coin_flip, 3000, 1e-9, 500000 + rep);
      if (big.p_hat >= small.ci_lo && big.p_hat <= small.ci_hi) ++covered;
    }
    CHECK(covered >= 93);
  }
}

TEST_CASE("boundary_correspondence") {
  Rng rng(3);
  const std::vector<int> phones = sample_phones(rng, 6, 5, 7);
  auto [a, b] = parallel_pair(rng, phones, {1.0, 1.0, 0.0}, {1.5, 3.0, 0.0}, 3, 16);

  Rng ra(0), rb(0);
  const Segmentation seg_a =
      segment(gram(a.seq), ThresholdParams::fixed(0.5), ra).segmentation;
  const Segmentation seg_b =
      segment(gram(b.seq), ThresholdParams::fixed(0.5), rb).segmentation;

  SUBCASE("identical utterances and segmentations score 1") {
    CHECK(boundary_correspondence(a, seg_a, a, seg_a) == 1.0);
  }

  SUBCASE("clean disproportional pair at fixed 0.5 scores 1") {
    CHECK(boundary_correspondence(a, seg_a, b, seg_b) == 1.0);
  }

  SUBCASE("symmetry") {
    const Segmentation singles = Segmentation::singletons(a.total_frames());
    CHECK(boundary_correspondence(a, singles, b, seg_b) ==
          boundary_correspondence(b, seg_b, a, singles));
  }

  SUBCASE("count mismatch scores below 1") {
    Rng rng2(9);
    const SyntheticUtterance utt = make_utterance(rng2, 4, 2, 2, {1.0, 1.0, 0.0}, 5, 8);
    const Segmentation phone_level =
        segment(gram(utt.seq), ThresholdParams::fixed(0.5), rng2).segmentation;
    const Segmentation singles = Segmentation::singletons(utt.total_frames());
    CHECK(boundary_correspondence(utt, singles, utt, phone_level) < 1.0);
  }

  SUBCASE("different phones throw") {
    Rng rng3(10);
    const SyntheticUtterance other = make_utterance(rng3, 6, 5, 7, {1.0, 1.0, 0.0}, 3, 16);
    if (other.phones != a.phones) {
      CHECK_THROWS_AS(
          boundary_correspondence(a, seg_a, other,
                                  Segmentation::singletons(other.total_frames())),
          ContentMismatch);
    }
  }
}

TEST_CASE("length_vs_tau_sweep") {
  Rng rng(12);
  const SyntheticUtterance utt = make_utterance(rng, 6, 5, 8, {1.0, 2.0, 0.0}, 3, 16);
  const GramMatrix gm = gram(utt.seq);

  std::vector<double> taus;
  for (double tau = 0.90; tau <= 1.10 + 1e-12; tau += 0.02) taus.push_back(tau);
  const auto rows = length_vs_tau_sweep(utt.seq, gm, taus);

  SUBCASE("row at tau 1 equals the frame count") {
    for (const auto& row : rows) {
      if (std::abs(row.tau - 1.0) < 1e-12) CHECK(row.out_len == utt.total_frames());
    }
  }

  SUBCASE("non-decreasing in tau on clean input") {
    for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].out_len >= rows[i - 1].out_len);
  }

  SUBCASE("tau 0.5 recovers the phone count") {
    const auto at_half = length_vs_tau_sweep(utt.seq, gm, {0.5});
    CHECK(at_half[0].out_len == static_cast<int>(utt.phones.size()));
  }

  SUBCASE("tau outside (0, 2) is rejected") {
    CHECK_THROWS_AS(length_vs_tau_sweep(utt.seq, gm, {0.0}), ConfigError);
    CHECK_THROWS_AS(length_vs_tau_sweep(utt.seq, gm, {2.0}), ConfigError);
  }
}
