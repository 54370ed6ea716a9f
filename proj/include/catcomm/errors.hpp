#pragma once

#include <stdexcept>
#include <string>

namespace catcomm {

// Raised when a function defined only on the promise set is applied to an
// input whose validity certificate is false.
struct PromiseViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an exhaustive enumeration would exceed its configured budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised on out-of-order register operations (e.g. measuring twice).
struct StageError : std::logic_error {
    using std::logic_error::logic_error;
};

// Raised by the engine when a protocol misbehaves: malformed message,
// party outputs disagree, or the common output is wrong in checked mode.
struct ProtocolBroken : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an operation's stated precondition fails in a way that must be
// reported distinctly from a negative result (e.g. a distinguishability check
// applied to a table that does not compute its target function).
struct PreconditionViolation : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace catcomm
