#pragma once

namespace donq {

// Entry point for the donq tool. Exit codes: 0 success, 1 bad input or
// validation failure, 2 numerical non-convergence.
int cli_main(int argc, const char* const* argv);

}  // namespace donq
