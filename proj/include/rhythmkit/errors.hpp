// rhythmkit/errors.hpp

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

#ifndef RHYTHMKIT_ERRORS_HPP_
#define RHYTHMKIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rhythmkit {

// Error taxonomy shared by every module.  The CLI maps these onto process
// exit codes: usage/configuration problems exit 1, data problems exit 2,
// numerical failures exit 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exit-1 class: a caller-supplied configuration value is out of contract.
struct ConfigError : Error { using Error::Error; };

// Exit-2 class: the data handed to an operation cannot be processed.
struct IoError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct DegenerateInput : Error { using Error::Error; };
struct DimMismatch : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct ContentMismatch : Error { using Error::Error; };
struct ZeroLength : Error { using Error::Error; };
struct UnknownDomain : Error { using Error::Error; };
struct InvalidPmf : Error { using Error::Error; };
struct HypothesisViolated : Error { using Error::Error; };

// Exit-3 class: a computation produced non-finite or inconsistent numbers.
struct NumericalError : Error { using Error::Error; };

}  // namespace rhythmkit

#endif  // RHYTHMKIT_ERRORS_HPP_
