// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <stdexcept>
#include <string>

namespace rbc {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition (dimension or config mismatch).
class ContractError : public Error {
public:
    using Error::Error;
};

// A configuration value is outside the supported set.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Image bytes could not be decoded.
class DecodeError : public Error {
public:
    using Error::Error;
};

// A persisted artifact (model or index file) is malformed.
class FormatError : public Error {
public:
    using Error::Error;
};

// Training input cannot produce a classifier.
class TrainingError : public Error {
public:
    using Error::Error;
};

// Corpus-level input problems (manifest rows, unreadable files).
class DataError : public Error {
public:
    using Error::Error;
};

} // namespace rbc
