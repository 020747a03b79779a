#pragma once

#include <stdexcept>
#include <string>

namespace negclass {

// Base of every exception thrown by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad command-line usage or configuration keys.
class UsageError : public Error {
public:
    using Error::Error;
};

// Malformed input data, violated data invariants, I/O failures on data files.
class DataError : public Error {
public:
    using Error::Error;
};

// Training failures (divergence, empty classes) and model-file problems.
class ModelError : public Error {
public:
    using Error::Error;
};

class ModelVersionError : public ModelError {
public:
    using ModelError::ModelError;
};

// Truncated or structurally damaged model file.
class ModelIntegrityError : public ModelError {
public:
    using ModelError::ModelError;
};

class ModelChecksumError : public ModelError {
public:
    using ModelError::ModelError;
};

}  // namespace negclass
