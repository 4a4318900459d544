#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bdsep::cli {

// Runs one invocation; args excludes the program name.  Returns the process
// exit code: 0 on success, 1 for usage and domain errors, 2 for file and
// format errors.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace bdsep::cli
