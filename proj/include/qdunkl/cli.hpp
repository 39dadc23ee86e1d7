#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qdunkl/error.hpp"

namespace qdunkl {

/// 0 all checks passed, 1 an identity failed, 2 usage or input schema, 3 numeric.
enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitNumeric = 3 };

ExitCode exit_code_for(ErrorCode code);

/// The qdunkl command line; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdunkl
