#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orthomap::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationFailure = 1,
    kIoFailure = 2,
    kNumericalFailure = 3,
};

/**
 * Runs one verb (synth, fit, eval, cosine, edit, report). `args` excludes the
 * program name. Data goes to `out` or to files, diagnostics to `err`.
 */
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orthomap::cli
