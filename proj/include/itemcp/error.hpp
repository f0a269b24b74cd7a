#pragma once

#include <stdexcept>
#include <string>

namespace itemcp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Invalid parameters: bounds, thresholds, unknown names.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Frequency requested over a sub-dataset with no active transaction.
class UndefinedFrequency : public Error {
public:
    UndefinedFrequency() : Error("frequency is undefined without active transactions") {}
};

/// Closure requested for an itemset whose cover is empty.
class EmptyCover : public Error {
public:
    EmptyCover() : Error("closure is undefined for an itemset with empty cover") {}
};

/// Propagator posted over a variable id the store does not know.
class UnknownVariable : public Error {
public:
    explicit UnknownVariable(int id) : Error("unknown variable id " + std::to_string(id)) {}
};

/// A query shape the selected engine cannot evaluate.
class NotSupported : public Error {
public:
    using Error::Error;
};

/// The brute-force oracle refuses instances above its size guard.
class SizeGuard : public Error {
public:
    using Error::Error;
};

class Timeout : public Error {
public:
    Timeout() : Error("time limit exceeded") {}
};

}  // namespace itemcp
