#pragma once

#include <stdexcept>
#include <string>

namespace riskcert {

// Bad user input: out-of-range values, malformed specs, dimension mismatches.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Filesystem-level failures: missing files, unreadable/unwritable paths.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Broken internal invariants (certificate corruption, impossible states).
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace riskcert
