#pragma once

#include <stdexcept>
#include <string>

namespace ratekit {

// One category per diagnostic class the CLI exposes. io/parse/schema/
// validation all map to exit code 1, backend to 2, ledger to 3; the
// category token still appears in the diagnostic so scripts can tell
// a missing file from a malformed one.
enum class ErrorCode {
    Io,
    Parse,
    Schema,
    Validation,
    Backend,
    Ledger,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

} // namespace ratekit
