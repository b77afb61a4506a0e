#pragma once

#include <stdexcept>
#include <string>

namespace saccade {

/// Bad input data or parameters: malformed documents, invariant violations,
/// out-of-range values. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A requested window does not fit inside the signal. Callers that iterate
/// over many sites catch this and count the site as skipped.
class BoundaryError : public ValidationError {
public:
    explicit BoundaryError(const std::string& what) : ValidationError(what) {}
};

/// Filesystem trouble: unreadable input, unwritable output. Exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// An experiment ran but produced nothing usable, e.g. an indicator that
/// fired on zero sites. Exit code 3.
class ExperimentError : public std::runtime_error {
public:
    explicit ExperimentError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace saccade
