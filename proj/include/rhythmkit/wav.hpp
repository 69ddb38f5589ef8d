// rhythmkit/wav.hpp

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

#ifndef RHYTHMKIT_WAV_HPP_
#define RHYTHMKIT_WAV_HPP_

#include <string>
#include <vector>

namespace rhythmkit {

/// Normalized mono waveform.  Samples live in [-1, 1].
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = 0;
};

/// Reads a RIFF/WAVE file.  Only the narrow ingestion format is accepted:
/// PCM, 16 bit, mono.  Integer samples are scaled by 1/32768.
///
/// Throws IoError if the file is missing or unreadable, FormatError for
/// anything that is not 16-bit mono PCM.
AudioSignal load_wav(const std::string& path);

/// Writes samples (clipped to [-1, 1]) as 16-bit mono PCM.  Used by the
/// corpus tooling and tests; the inverse of load_wav up to quantization.
void write_wav(const std::string& path, const AudioSignal& audio);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_WAV_HPP_
