#pragma once

#include <stdexcept>
#include <string>

namespace gfc {

// Base class for all library failures.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// A mathematical precondition was violated (argument on the branch cut, s <= 0, ...).
struct domain_error : error {
    using error::error;
};

// Malformed user input: kernel spec files, CLI values. Maps to CLI exit code 1.
struct input_error : error {
    using error::error;
};

// The kernel does not satisfy a requirement of the requested operation
// (bounded symbol, divergent tail integral, ...). Maps to CLI exit code 2.
struct admissibility_error : error {
    using error::error;
};

// An adaptive scheme ran out of budget before reaching its tolerance.
// Maps to CLI exit code 2.
struct convergence_error : error {
    using error::error;
};

} // namespace gfc
