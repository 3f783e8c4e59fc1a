#pragma once

#include <stdexcept>
#include <string>

namespace coinc {

struct NotInvertible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BadModulus : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GroupTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotNormal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotAbelianQuotient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedRecord : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violation of an internal invariant that is supposed to be a theorem.
struct InternalInconsistency : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace coinc
