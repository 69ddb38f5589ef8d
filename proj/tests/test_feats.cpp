#include <doctest.h>

#include <cmath>

#include "rhythmkit/errors.hpp"
#include "rhythmkit/feats.hpp"
#include "test_support.hpp"

using namespace rhythmkit;
using rhythmkit::testing::TempDir;

namespace {

AudioSignal sine(double freq, double seconds, int rate, double amp = 0.5) {
  AudioSignal audio;
  audio.sample_rate = rate;
  const auto n = static_cast<size_t>(seconds * rate);
  audio.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    audio.samples[i] = amp * std::sin(2.0 * M_PI * freq * static_cast<double>(i) / rate);
  }
  return audio;
}

AudioSignal silence(double seconds, int rate) {
  AudioSignal audio;
  audio.sample_rate = rate;
  audio.samples.assign(static_cast<size_t>(seconds * rate), 0.0);
  return audio;
}

// Independent framing oracle: count frame starts by walking the signal.
int count_frames(int len, int frame_len, int hop) {
  int t = 0;
  for (int start = 0; start + frame_len <= len; start += hop) ++t;
  return t;
}

}  // namespace

TEST_CASE("load_wav reads 16-bit mono PCM and scales by 1/32768") {
  TempDir dir("wav");

  SUBCASE("silence") {
    std::vector<int16_t> samples(16000, 0);
    testing::write_bytes(dir.file("z.wav"), testing::wav_bytes(samples, 16000, 1));
    const AudioSignal audio = load_wav(dir.file("z.wav"));
    CHECK(audio.sample_rate == 16000);
    CHECK(audio.samples.size() == 16000);
    for (double s : audio.samples) CHECK(s == 0.0);
  }

  SUBCASE("integer 16384 decodes to 0.5") {
    testing::write_bytes(dir.file("h.wav"), testing::wav_bytes({16384, -32768}, 8000, 1));
    const AudioSignal audio = load_wav(dir.file("h.wav"));
    CHECK(audio.samples[0] == 0.5);
    CHECK(audio.samples[1] == -1.0);
  }

  SUBCASE("stereo rejected") {
    testing::write_bytes(dir.file("s.wav"), testing::wav_bytes({0, 0, 0, 0}, 8000, 2));
    CHECK_THROWS_AS(load_wav(dir.file("s.wav")), FormatError);
  }

  SUBCASE("missing file") { CHECK_THROWS_AS(load_wav(dir.file("nope.wav")), IoError); }

  SUBCASE("garbage rejected") {
    testing::write_bytes(dir.file("g.wav"), {1, 2, 3, 4, 5});
    CHECK_THROWS_AS(load_wav(dir.file("g.wav")), FormatError);
  }

  SUBCASE("write_wav round-trips") {
    AudioSignal audio = sine(440.0, 0.05, 16000);
    write_wav(dir.file("rt.wav"), audio);
    const AudioSignal back = load_wav(dir.file("rt.wav"));
    REQUIRE(back.samples.size() == audio.samples.size());
    for (size_t i = 0; i < back.samples.size(); ++i) {
      CHECK(back.samples[i] == doctest::Approx(audio.samples[i]).epsilon(1e-3));
    }
  }
}

TEST_CASE("mfcc framing matches the hand-count oracle") {
  const AudioSignal audio = silence(1.0, 16000);
  const FrameSequence seq = mfcc(audio);
  CHECK(seq.num_frames() == 98);
  CHECK(seq.num_frames() == count_frames(16000, 400, 160));
  CHECK(seq.dim() == 13);
}

TEST_CASE("mfcc of silence gives identical frames equal to the DCT of the log floor") {
  const FrameSequence seq = mfcc(silence(0.2, 16000));
  REQUIRE(seq.num_frames() > 1);
  for (Eigen::Index t = 1; t < seq.num_frames(); ++t) {
    CHECK((seq.frames.row(t) - seq.frames.row(0)).cwiseAbs().maxCoeff() == 0.0);
  }
  // DCT of a constant vector: only coefficient 0 is nonzero.
  const double expected_c0 = std::log(1e-10) * std::sqrt(static_cast<double>(FeatConfig{}.n_mels));
  CHECK(seq.frames(0, 0) == doctest::Approx(expected_c0).epsilon(1e-9));
  for (Eigen::Index c = 1; c < seq.dim(); ++c) CHECK(std::abs(seq.frames(0, c)) < 1e-9);
}

TEST_CASE("mfcc has no NaN and is deterministic") {
  const AudioSignal audio = sine(313.0, 0.3, 16000, 0.9);
  const FrameSequence a = mfcc(audio);
  const FrameSequence b = mfcc(audio);
  CHECK(a.frames.allFinite());
  CHECK((a.frames - b.frames).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mfcc separates distinct tones") {
  const FrameSequence a = mfcc(sine(440.0, 0.5, 16000));
  const FrameSequence b = mfcc(sine(880.0, 0.5, 16000));
  Eigen::VectorXd ma = a.frames.colwise().mean();
  Eigen::VectorXd mb = b.frames.colwise().mean();
  ma.normalize();
  mb.normalize();
  CHECK(ma.dot(mb) < 0.999);
}

TEST_CASE("log_mel_spectrogram") {
  SUBCASE("silence maps every bin to log(1e-10)") {
    const FrameSequence seq = log_mel_spectrogram(silence(0.1, 16000));
    CHECK(seq.frames.minCoeff() == doctest::Approx(std::log(1e-10)).epsilon(1e-12));
    CHECK(seq.frames.maxCoeff() == doctest::Approx(std::log(1e-10)).epsilon(1e-12));
  }

  SUBCASE("same framing as mfcc, d = n_mels") {
    FeatConfig cfg;
    cfg.n_mels = 80;
    cfg.n_coeffs = 13;
    const FrameSequence seq = log_mel_spectrogram(silence(1.0, 16000), cfg);
    CHECK(seq.num_frames() == 98);
    CHECK(seq.dim() == 80);
  }
}

TEST_CASE("feature config and input validation") {
  CHECK_THROWS_AS(mfcc(silence(0.001, 16000)), EmptyInput);
  FeatConfig bad;
  bad.hop_s = 0.05;  // hop > frame length
  CHECK_THROWS_AS(mfcc(silence(1.0, 16000), bad), ConfigError);
  FeatConfig bad2;
  bad2.n_coeffs = 40;  // > n_mels
  CHECK_THROWS_AS(mfcc(silence(1.0, 16000), bad2), ConfigError);
}

TEST_CASE("normalize") {
  SUBCASE("single frame becomes zero") {
    FrameSequence seq;
    seq.frames.resize(1, 2);
    seq.frames << 3.0, 5.0;
    const FrameSequence out = normalize(seq);
    CHECK(out.frames(0, 0) == 0.0);
    CHECK(out.frames(0, 1) == 0.0);
  }

  SUBCASE("two frames z-score to -1, 1") {
    FrameSequence seq;
    seq.frames.resize(2, 1);
    seq.frames << 0.0, 2.0;
    const FrameSequence out = normalize(seq);
    CHECK(out.frames(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(out.frames(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("constant column stays finite and zero") {
    FrameSequence seq;
    seq.frames.resize(3, 2);
    seq.frames << 7.0, 1.0, 7.0, 2.0, 7.0, 3.0;
    const FrameSequence out = normalize(seq);
    CHECK(out.frames.col(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(out.frames.allFinite());
  }

  SUBCASE("idempotent within 1e-10") {
    FrameSequence seq;
    seq.frames.resize(5, 3);
    seq.frames << 0.3, -1.2, 4.0, 2.0, 0.1, -0.5, -3.0, 2.2, 1.1, 0.7, -0.4, 2.5, 1.9, 0.0, -2.0;
    const FrameSequence once = normalize(seq);
    const FrameSequence twice = normalize(once);
    CHECK((once.frames - twice.frames).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("empty input throws") {
    FrameSequence seq;
    seq.frames.resize(0, 3);
    CHECK_THROWS_AS(normalize(seq), EmptyInput);
  }
}

TEST_CASE("feature CSV round-trip") {
  TempDir dir("feats");
  const FrameSequence seq = mfcc(sine(440.0, 0.1, 16000));
  write_features_csv(dir.file("f.csv"), seq);
  const FrameSequence back = read_features_csv(dir.file("f.csv"));
  REQUIRE(back.num_frames() == seq.num_frames());
  REQUIRE(back.dim() == seq.dim());
  CHECK((back.frames - seq.frames).cwiseAbs().maxCoeff() < 1e-6);  // 9 significant digits
}
