#pragma once

#include <stdexcept>
#include <string>

namespace noisecal::workbench {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitSchema = 3,
    kExitFitFailure = 4,
};

// Malformed config, record or report document. The message names the file and,
// where known, the row and column.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Output could not be written or input could not be opened.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace noisecal::workbench
