#pragma once

// Command-line verbs over a workspace. Exit status: 0 success, 1 property
// violation found, 2 usage or input error.

#include <string>
#include <vector>

#include "uag/workspace.hpp"

namespace uag {

struct CommandResult {
  int status = 0;
  std::string out;
  std::string err;
};

/// `args` excludes the program name. Files named with --load or as trailing
/// arguments of `parse` are read into `ws` first.
CommandResult run_command(Workspace& ws, const std::vector<std::string>& args);

}  // namespace uag
