#pragma once

#include <stdexcept>
#include <string>

namespace shrinker {

// Input does not satisfy an operation's precondition (bad radius, out of range parameter, ...).
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not deliver a result at the requested accuracy.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The extremal distance of a sweep is only approached at the end of the sampled range.
class infimum_at_infinity : public precondition_error {
public:
    using precondition_error::precondition_error;
};

}  // namespace shrinker
