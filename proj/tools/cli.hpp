#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace noncross::cli {

// Exit codes: 0 success, 1 violation or construction failure, 2 schema, precondition or usage
// error, 3 evaluation error.
int exit_code_for(const std::string& error_code);

// args excludes the program name. JSON goes to `out` unless --out is given; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace noncross::cli
