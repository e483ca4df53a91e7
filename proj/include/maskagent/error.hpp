#pragma once

#include <stdexcept>
#include <string>

namespace maskagent {

// Base for everything the library throws on bad data or failed I/O.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Replaying a stored trajectory did not reproduce its stored masks.
class CorruptInput : public Error {
public:
    using Error::Error;
};

}  // namespace maskagent
