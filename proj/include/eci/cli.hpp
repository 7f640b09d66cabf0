#pragma once

// Command-line front end. Exit codes: 0 derived / true / no violation,
// 1 not derived / false / counterexample found, 2 usage or input error.

#include <iosfwd>
#include <string>
#include <vector>

namespace eci {

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eci
