#pragma once

namespace namecraft {

// Runs one subcommand. Returns 0 on success, 2 on usage errors and 1 on
// runtime failures (with a diagnostic on stderr).
int dispatch(int argc, const char* const* argv);

}  // namespace namecraft
