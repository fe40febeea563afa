#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace noncyclic::cli {

enum ExitCode : int { ok = 0, usage = 1, budget = 2, contract = 3 };

/// Runs one command line (without the program name). Human-readable
/// summaries go to `out`, diagnostics to `err`.
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

/// Writes `content` to `path` through a temporary file and a rename.
void write_atomic(const std::string & path, const std::string & content);

} // namespace noncyclic::cli
