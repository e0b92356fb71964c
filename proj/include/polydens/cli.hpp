#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polydens::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kValidation = 2, kGuard = 3 };

// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polydens::cli
