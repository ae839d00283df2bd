#pragma once

#include <stdexcept>

namespace ladar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raw byte stream length is not a whole number of frames.
class TruncatedFile : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

/// Data dimensions disagree with the configured sensor geometry.
class ConfigMismatch : public Error {
public:
    using Error::Error;
};

/// A configuration value violates its documented range.
class InvalidConfig : public Error {
public:
    using Error::Error;
};

/// Innovation covariance could not be inverted (bad noise settings).
class SingularInnovation : public Error {
public:
    using Error::Error;
};

/// Caller broke a tracker precondition (e.g. too many observations).
class ConfigViolation : public Error {
public:
    using Error::Error;
};

/// Requested history step has already left the ring.
class EntryEvicted : public Error {
public:
    using Error::Error;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

/// Malformed scene or configuration text.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Internal consistency check failed. Always a bug.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace ladar
