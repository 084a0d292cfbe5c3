#ifndef PARWIN_ERRORS_H
#define PARWIN_ERRORS_H

#include <stdexcept>
#include <string>

namespace parwin {

/// Raised when user-supplied parameters violate a documented precondition.
class ParameterError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when data handed to an operation does not belong to the structure it claims to
/// (e.g. an unknown fault id, an edge referring to a missing vertex).
class IntegrityError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Raised when a caller breaks an operation's contract, such as a defect lying outside a window.
class ContractViolation : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

/// Raised when a partition or schedule fails a structural check.
class ValidationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class SizeLimitError : public std::length_error {
   public:
    using std::length_error::length_error;
};

}  // namespace parwin

#endif
