#pragma once

#include <stdexcept>
#include <string>

namespace fgstdp {

/// Configuration or input that violates a documented invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A device equation was evaluated outside its numeric range (exponent cap).
class ModelRangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fgstdp
