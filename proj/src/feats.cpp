// rhythmkit/feats.cpp

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

#include "rhythmkit/feats.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <vector>

#include "rhythmkit/csv.hpp"
#include "rhythmkit/errors.hpp"

namespace rhythmkit {

namespace {

constexpr double kPreEmphasis = 0.97;
constexpr double kLogFloor = 1e-10;
constexpr double kPi = 3.14159265358979323846;

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

struct Framing {
  int frame_len = 0;
  int hop = 0;
  int num_frames = 0;
};

Framing make_framing(const AudioSignal& audio, const FeatConfig& cfg) {
  cfg.validate();
  if (audio.sample_rate <= 0) throw FormatError("audio has no sample rate");
  Framing framing;
  framing.frame_len = static_cast<int>(std::lround(cfg.frame_len_s * audio.sample_rate));
  framing.hop = static_cast<int>(std::lround(cfg.hop_s * audio.sample_rate));
  if (framing.frame_len <= 0 || framing.hop <= 0) throw ConfigError("frame/hop too small for sample rate");
  const auto len = static_cast<int>(audio.samples.size());
  if (len < framing.frame_len) throw EmptyInput("audio shorter than one frame");
  framing.num_frames = (len - framing.frame_len) / framing.hop + 1;
  return framing;
}

/// Triangular mel filterbank over FFT bin center frequencies.
Eigen::MatrixXd mel_filterbank(int n_mels, int n_fft, int sample_rate) {
  const int n_bins = n_fft / 2 + 1;
  Eigen::MatrixXd filters = Eigen::MatrixXd::Zero(n_mels, n_bins);
  const double mel_lo = hz_to_mel(0.0);
  const double mel_hi = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));
  }
  for (int m = 0; m < n_mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / n_fft;
      if (f > left && f < center) {
        filters(m, k) = (f - left) / (center - left);
      } else if (f >= center && f < right) {
        filters(m, k) = (right - f) / (right - center);
      }
    }
  }
  return filters;
}

/// Per-frame mel energies (magnitude spectrum through the filterbank).
Eigen::MatrixXd mel_energies(const AudioSignal& audio, const FeatConfig& cfg, const Framing& framing) {
  const int n_fft = next_pow2(framing.frame_len);
  const int n_bins = n_fft / 2 + 1;
  const Eigen::MatrixXd filters = mel_filterbank(cfg.n_mels, n_fft, audio.sample_rate);

  std::vector<double> emphasized(audio.samples.size());
  if (!audio.samples.empty()) {
    emphasized[0] = audio.samples[0];
    for (size_t i = 1; i < audio.samples.size(); ++i) {
      emphasized[i] = audio.samples[i] - kPreEmphasis * audio.samples[i - 1];
    }
  }

  std::vector<double> window(framing.frame_len);
  for (int n = 0; n < framing.frame_len; ++n) {
    window[n] = 0.5 * (1.0 - std::cos(2.0 * kPi * n / framing.frame_len));
  }

  Eigen::FFT<double> fft;
  std::vector<double> buffer(n_fft, 0.0);
  std::vector<std::complex<double>> spectrum;
  Eigen::VectorXd magnitude(n_bins);

  Eigen::MatrixXd energies(framing.num_frames, cfg.n_mels);
  for (int t = 0; t < framing.num_frames; ++t) {
    const int start = t * framing.hop;
    for (int n = 0; n < framing.frame_len; ++n) {
      buffer[n] = emphasized[start + n] * window[n];
    }
    std::fill(buffer.begin() + framing.frame_len, buffer.end(), 0.0);
    fft.fwd(spectrum, buffer);
    for (int k = 0; k < n_bins; ++k) magnitude(k) = std::abs(spectrum[k]);
    energies.row(t) = (filters * magnitude).transpose();
  }
  return energies;
}

/// Orthonormal DCT-II basis, keeping the first n_coeffs rows.
Eigen::MatrixXd dct_basis(int n_coeffs, int n_mels) {
  Eigen::MatrixXd basis(n_coeffs, n_mels);
  const double scale0 = std::sqrt(1.0 / n_mels);
  const double scale = std::sqrt(2.0 / n_mels);
  for (int k = 0; k < n_coeffs; ++k) {
    for (int m = 0; m < n_mels; ++m) {
      basis(k, m) = (k == 0 ? scale0 : scale) * std::cos(kPi * k * (2 * m + 1) / (2.0 * n_mels));
    }
  }
  return basis;
}

}  // namespace

void FeatConfig::validate() const {
  if (!(hop_s > 0.0) || !(frame_len_s >= hop_s)) throw ConfigError("need frame_len_s >= hop_s > 0");
  if (n_mels < 1) throw ConfigError("n_mels must be >= 1");
  if (n_coeffs < 1 || n_coeffs > n_mels) throw ConfigError("need 1 <= n_coeffs <= n_mels");
}

FrameSequence mfcc(const AudioSignal& audio, const FeatConfig& cfg) {
  const Framing framing = make_framing(audio, cfg);
  const Eigen::MatrixXd energies = mel_energies(audio, cfg, framing);
  const Eigen::MatrixXd log_energies = energies.cwiseMax(kLogFloor).array().log().matrix();
  const Eigen::MatrixXd basis = dct_basis(cfg.n_coeffs, cfg.n_mels);

  FrameSequence seq;
  seq.frames.resize(framing.num_frames, cfg.n_coeffs);
  // Row-by-row products keep identical frames bit-identical (a blocked
  // matrix product may round remainder rows differently).
  for (int t = 0; t < framing.num_frames; ++t) {
    seq.frames.row(t) = (basis * log_energies.row(t).transpose()).transpose();
  }
  seq.frame_period = cfg.hop_s;
  return seq;
}

FrameSequence log_mel_spectrogram(const AudioSignal& audio, const FeatConfig& cfg) {
  const Framing framing = make_framing(audio, cfg);
  const Eigen::MatrixXd energies = mel_energies(audio, cfg, framing);

  FrameSequence seq;
  seq.frames = (energies.array() + kLogFloor).log().matrix();
  seq.frame_period = cfg.hop_s;
  return seq;
}

FrameSequence normalize(const FrameSequence& seq) {
  if (seq.num_frames() < 1) throw EmptyInput("normalize needs at least one frame");
  FrameSequence out = seq;
  const auto t = static_cast<double>(seq.num_frames());
  for (Eigen::Index c = 0; c < seq.dim(); ++c) {
    const double mean = seq.frames.col(c).mean();
    out.frames.col(c).array() -= mean;
    const double sd = std::sqrt(out.frames.col(c).squaredNorm() / t);
    if (sd >= 1e-8) out.frames.col(c) /= sd;
  }
  return out;
}

void write_features_csv(const std::string& path, const FrameSequence& seq) {
  CsvTable table;
  table.header.push_back("t");
  for (Eigen::Index c = 0; c < seq.dim(); ++c) table.header.push_back("c" + std::to_string(c));
  for (Eigen::Index t = 0; t < seq.num_frames(); ++t) {
    std::vector<std::string> row;
    row.push_back(std::to_string(t));
    for (Eigen::Index c = 0; c < seq.dim(); ++c) row.push_back(g9(seq.frames(t, c)));
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table);
}

FrameSequence read_features_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  if (table.header.size() < 2 || table.header[0] != "t") throw FormatError("bad feature header: " + path);
  const auto d = static_cast<Eigen::Index>(table.header.size() - 1);
  FrameSequence seq;
  seq.frames.resize(static_cast<Eigen::Index>(table.rows.size()), d);
  for (size_t i = 0; i < table.rows.size(); ++i) {
    if (static_cast<Eigen::Index>(table.rows[i].size()) != d + 1) throw FormatError("ragged feature row in " + path);
    for (Eigen::Index c = 0; c < d; ++c) {
      seq.frames(static_cast<Eigen::Index>(i), c) = std::stod(table.rows[i][static_cast<size_t>(c + 1)]);
    }
  }
  seq.source_id = path;
  return seq;
}

}  // namespace rhythmkit
