#include "nanocool/errors.hpp"

namespace nanocool {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::kInvalidParam: return "InvalidParam";
        case ErrorKind::kNoConvergence: return "NoConvergence";
        case ErrorKind::kUnstableSystem: return "UnstableSystem";
        case ErrorKind::kDegenerateModes: return "DegenerateModes";
        case ErrorKind::kQuadratureFailure: return "QuadratureFailure";
        case ErrorKind::kAllUnstable: return "AllUnstable";
        case ErrorKind::kSingularSolve: return "SingularSolve";
        case ErrorKind::kStepTooLarge: return "StepTooLarge";
        case ErrorKind::kIoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace nanocool
