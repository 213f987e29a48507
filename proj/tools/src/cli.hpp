// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace neuronscope::cli {

/// Runs one CLI invocation. `args` excludes the program name. Artifacts and
/// summaries go to `out`, structured errors to `err`. Returns the exit status:
/// 0 success, 2 usage error, 3 data or I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace neuronscope::cli
