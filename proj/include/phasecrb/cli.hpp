#pragma once

#include <ostream>
#include <string>

#include "phasecrb/config.hpp"

namespace phasecrb {

/// Output of one command.
struct Artifact {
    std::string content;
    /// Extra files (path, content) such as the simulate trace.
    std::vector<std::pair<std::string, std::string>> side_files;
};

/// Runs the command and returns its output without writing anything. Throws on failure.
Artifact execute(const RunConfig& config);

/// Runs the command, writes the artifact to config.out (atomically) or `out`, and the manifest
/// to `<out>.manifest.json` or `log`. On failure writes an error object to `out` and returns 1.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Error object {"error": {"kind", "message", "field"?}}.
std::string error_json(const std::exception& e);

} // namespace phasecrb
