#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace freenorm::cli {

/// Exit codes: 0 when the outcome is pass or a value, 1 on fail, 2 on a
/// usage or library error.
enum Exit : int { kPass = 0, kFail = 1, kError = 2 };

/// Runs one invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace freenorm::cli
