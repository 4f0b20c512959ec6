// cli.hpp
// Command-line front end: one subcommand per experiment, CSV on success.
// Exit codes: 0 success, 2 invalid arguments, 1 runtime or resource failure.

#pragma once

#include <ostream>

namespace primelab::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace primelab::cli
