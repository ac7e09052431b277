#pragma once

namespace fou::cli {

// Subcommand dispatcher. Exit codes: 0 pass, 1 statistical failure, 2 usage error.
int dispatch(int argc, const char* const* argv);

} // namespace fou::cli
