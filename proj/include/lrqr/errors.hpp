#pragma once

#include <stdexcept>
#include <string>

namespace lrqr {

// Input dimensions disagree (matrix/vector arity, column counts).
class shape_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The hypothesis vanishes where a nonzero value is required (e.g. on all of S3).
class degenerate_hypothesis_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A covariate split produced an empty side.
class degenerate_split_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// CSV or JSON input could not be parsed; message carries the location.
class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A linear system was numerically singular.
class singular_system_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lrqr
