// Exception hierarchy shared by all monohire modules.
//
// ArgumentError and its children signal caller mistakes (bad domains,
// violated preconditions, malformed input). NumericalError and its children
// signal that a well-posed computation failed to produce a result.
#pragma once

#include <stdexcept>
#include <string>

namespace monohire {

class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A value outside the range of an invertible map (e.g. t above U_n(1)).
class RangeError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

// A model precondition (capacity bound, threshold bound) does not hold.
class PreconditionError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

// Input data that is internally inconsistent (overfull strategy, bad file).
class ValidationError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace monohire
