#include "ratekit/error.hpp"

namespace ratekit {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io: return "io";
        case ErrorCode::Parse: return "parse";
        case ErrorCode::Schema: return "schema";
        case ErrorCode::Validation: return "validation";
        case ErrorCode::Backend: return "backend";
        case ErrorCode::Ledger: return "ledger";
    }
    return "unknown";
}

void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace ratekit
