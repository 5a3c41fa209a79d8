#pragma once

#include <stdexcept>
#include <string>

namespace qmatch {

/// Bad user input: malformed files, out-of-range parameters, oversized instances.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Instance exceeds a hard size cap of an exact routine.
class InstanceTooLarge : public InputError {
public:
    using InputError::InputError;
};

/// A checked mathematical invariant did not hold at runtime.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qmatch
