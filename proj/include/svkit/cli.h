// svkit/cli.h

// Copyright 2026  svkit authors

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

#ifndef SVKIT_CLI_H_
#define SVKIT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace svkit {

/// Runs one command line (without the program name).  A one-line key=value
/// summary goes to out; usage text and errors go to err.  Returns 0 on
/// success, 1 for usage errors, 2 for data errors, 3 for numeric failures.
int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace svkit

#endif  // SVKIT_CLI_H_
