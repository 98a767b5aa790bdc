#pragma once

#include <stdexcept>
#include <string>

namespace mip {

/** Raised when inputs violate a documented precondition (bad file, bad
 *  partition, out-of-range parameter, ...).  Maps to process exit code 2. */
class invalid_input : public std::invalid_argument {
public:
    explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

/** Raised when a computation fails numerically (e.g. a matrix that stays
 *  indefinite after the jitter escalation, or a diverging simulation).
 *  Maps to process exit code 3. */
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mip
