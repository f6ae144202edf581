#pragma once

#include <stdexcept>
#include <string>

namespace dgm {

/// Malformed or inconsistent user input: bad scalars, dimension or field
/// mismatches, references that do not resolve, presentations that fail
/// validation when validity is a precondition.
class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FieldMismatch : public InvalidInput {
public:
    FieldMismatch() : InvalidInput("operands live over different fields") {}
};

class DimensionMismatch : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// A violated postcondition inside the library. Seeing one of these is a bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace dgm
