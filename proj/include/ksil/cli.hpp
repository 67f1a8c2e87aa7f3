#ifndef KSIL_CLI_HPP
#define KSIL_CLI_HPP

#include <ostream>

namespace ksil {

/**
 * Entry point of the `ksil` command line tool.
 * Subcommands: `cluster`, `bench`, `approx-eval`, `gen-data`, `sweep-p`.
 * Returns 0 on success, 1 on usage errors, 2 on data errors.
 */
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ksil

#endif
