// Command-line surface: simulate, quasistatic, sweep, fit, compare, verify.
// Exit codes: 0 ok, 2 configuration error, 3 solver abort, 4 verify failure.
#pragma once

namespace tfelab {

int run_cli(int argc, const char* const* argv);

}  // namespace tfelab
