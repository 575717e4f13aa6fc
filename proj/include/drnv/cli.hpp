#pragma once

#include <iosfwd>
#include <string>

#include "drnv/dist.hpp"

namespace drnv {

/// Runs one `drnv` command. Returns 0 on success, 2 for usage errors and 1
/// for data or domain errors. Artifacts go to `--out` (written atomically) or
/// to `out`; the one-line summary goes to `out` when an artifact file was
/// written and to `err` otherwise.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "uniform", "beta:a,b", "point:x", or the path of a `level,value` quantile CSV.
PredictiveCdf parse_dist_spec(const std::string& text);

/// Writes `content` to `path` through a temporary file in the same directory.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace drnv
