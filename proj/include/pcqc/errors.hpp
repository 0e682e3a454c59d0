#pragma once

#include <stdexcept>
#include <string>

namespace pcqc {

// Error classes map one-to-one onto CLI exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad configuration, bad input files, out-of-range parameters (exit 2).
struct ConfigError : Error {
    using Error::Error;
};

// Numeric failure at run time: impossible measurement outcome, singular
// system, integration breakdown (exit 3).
struct NumericError : Error {
    using Error::Error;
};

// Not enough accepted shots to estimate (exit 4).
struct InsufficientDataError : Error {
    using Error::Error;
};

}  // namespace pcqc
