// SPDX-License-Identifier: Apache-2.0
#ifndef TSFUZZY_ERRORS_HPP
#define TSFUZZY_ERRORS_HPP

#include <stdexcept>

namespace tsfuzzy {

/// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scalar argument is outside its legal domain (non-positive variance, negative weight, ...).
class invalid_parameter : public error {
public:
    using error::error;
};

/// Vector or matrix dimensions do not agree.
class shape_error : public error {
public:
    using error::error;
};

/// A configuration value violates its constraints (cluster count, keep counts, ...).
class config_error : public error {
public:
    using error::error;
};

/// Operation called on an object in the wrong state (e.g. centering twice).
class state_error : public error {
public:
    using error::error;
};

/// Malformed input text: a CSV cell or a corrupt model payload.
class parse_error : public error {
public:
    using error::error;
};

/// Filesystem-level failure (missing file, unwritable path).
class io_error : public error {
public:
    using error::error;
};

/// Model file carries a schema version this build does not understand.
class schema_error : public error {
public:
    using error::error;
};

/// Numerically undefined result: singular matrix, zero output energy.
class numeric_error : public error {
public:
    using error::error;
};

} // namespace tsfuzzy

#endif // TSFUZZY_ERRORS_HPP
