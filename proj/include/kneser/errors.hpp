#pragma once

#include <stdexcept>
#include <string>

namespace kneser {

// Error taxonomy shared with the CLI exit codes:
//   PreconditionError -> 1, GuardError -> 2, InvariantViolation -> 3.

class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

class GuardError : public std::runtime_error {
public:
    explicit GuardError(const std::string& what, long long partial_count = -1)
        : std::runtime_error(what), partial_count(partial_count) {}

    // For bounded enumerations: how many items were produced before the bound hit.
    long long partial_count;
};

// A theorem-backed internal step failed. This never fires on correct inputs;
// if it does, it is a bug report, not a user error.
class InvariantViolation : public std::logic_error {
public:
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace kneser
