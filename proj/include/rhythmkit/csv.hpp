// rhythmkit/csv.hpp

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

#ifndef RHYTHMKIT_CSV_HPP_
#define RHYTHMKIT_CSV_HPP_

#include <string>
#include <vector>

namespace rhythmkit {

/// %g formatting with a fixed number of significant digits.  All CSV files
/// use 9 digits; model files use 17 (lossless for doubles).
std::string format_sig(double value, int digits);

inline std::string g9(double value) { return format_sig(value, 9); }
inline std::string g17(double value) { return format_sig(value, 17); }

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads a comma-separated file; first line is taken as the header.
/// Quoting is not supported (no writer here ever emits quotes).
CsvTable read_csv(const std::string& path);

/// Writes header + rows as comma-joined lines with trailing newline.
void write_csv(const std::string& path, const CsvTable& table);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_CSV_HPP_
