#pragma once

#include <stdexcept>

namespace moebius {

// Allocation of a table or working buffer failed; the message reports the
// requested size in bytes.
struct allocation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A floating-point computation did not land within its required tolerance
// (never silently rounded away).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File-level failure: unreadable, unwritable, or malformed on-disk data.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace moebius
