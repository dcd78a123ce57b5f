#ifndef SLIDESVM_CLI_HPP
#define SLIDESVM_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace slidesvm {

// Exit codes: 0 success (including a non-converged train), 1 runtime,
// IO or validation failure, 2 usage error. proxcheck returns 3 when the
// deviation limit is exceeded.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slidesvm

#endif  // SLIDESVM_CLI_HPP
