// rhythmkit/cli.hpp

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

#ifndef RHYTHMKIT_CLI_HPP_
#define RHYTHMKIT_CLI_HPP_

namespace rhythmkit::cli {

/// Command-line entry point.  Exit codes: 0 success, 1 usage or
/// configuration error, 2 data error, 3 numerical error.  Every randomized
/// subcommand derives its generators from --seed (fallback: the
/// RHYTHM_KIT_SEED environment variable), so identical invocations produce
/// byte-identical output files.
int run(int argc, const char* const* argv);

}  // namespace rhythmkit::cli

#endif  // RHYTHMKIT_CLI_HPP_
