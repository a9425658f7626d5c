#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nanocool {

// Machine-readable failure categories. These map 1:1 onto the "kind" field
// of the JSON error records the CLI prints on exit code 1.
enum class ErrorKind {
    kInvalidParam,
    kNoConvergence,
    kUnstableSystem,
    kDegenerateModes,
    kQuadratureFailure,
    kAllUnstable,
    kSingularSolve,
    kStepTooLarge,
    kIoError,
};

const char* error_kind_name(ErrorKind kind);

// Exception carrying a kind plus optional key/value context for reporting.
class SimError : public std::runtime_error {
public:
    using Context = std::vector<std::pair<std::string, std::string>>;

    SimError(ErrorKind kind, std::string message, Context context = {})
        : std::runtime_error(std::move(message)),
          kind_(kind),
          context_(std::move(context)) {}

    ErrorKind kind() const { return kind_; }
    const char* kind_name() const { return error_kind_name(kind_); }
    const Context& context() const { return context_; }

private:
    ErrorKind kind_;
    Context context_;
};

// Command-line / config misuse. Maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(std::string message)
        : std::runtime_error(std::move(message)) {}
};

}  // namespace nanocool
