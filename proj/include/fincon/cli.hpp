#pragma once

#include <ostream>

namespace fincon::cli {

// Exit codes: 0 success, 1 internal failure, 2 usage, input or precondition
// error. The human-readable summary goes to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fincon::cli
