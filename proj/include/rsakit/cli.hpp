// cli.hpp -- command dispatcher behind the rsakit executable
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rsakit/errors.hpp"

namespace rsakit {

enum ExitCode : int {
    exit_ok = 0,
    exit_negative = 1,  // negative verdict under --fail-on-no
    exit_input = 2,
    exit_resource = 3,
    exit_cancelled = 130,
};

/// Runs one command.  `args` excludes the program name.  Verdicts and printed
/// artifacts go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CancelToken* cancel = nullptr);

/// Parses the RSAKIT_CAPS value `macrostates,basis,forwarddepth`; empty
/// fields keep their defaults.
Limits parse_caps(const std::string& spec);

}  // namespace rsakit
