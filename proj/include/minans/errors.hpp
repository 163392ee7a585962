#pragma once

#include <stdexcept>
#include <string>

namespace minans {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    ParseError(int line, int col, const std::string& msg)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line(line), col(col), message(msg) {}
    int line, col;
    std::string message;
};

struct SemanticError : Error {
    using Error::Error;
};

// Resource guard on the brute-force reference semantics.
struct TooLarge : Error {
    using Error::Error;
};

struct NotStratified : Error {
    using Error::Error;
};

struct NotStrongCover : Error {
    using Error::Error;
};

struct NotCyclic : Error {
    using Error::Error;
};

struct NotCyclicSeed : Error {
    using Error::Error;
};

struct PartitionRequired : Error {
    using Error::Error;
};

// Database has no stable model; answer enumeration is meaningless.
struct Inconsistent : Error {
    using Error::Error;
};

struct StaleCompilation : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct FormatError : Error {
    using Error::Error;
};

struct StateVerified : Error {
    using Error::Error;
};

struct StateComplete : Error {
    using Error::Error;
};

struct EmptyState : Error {
    using Error::Error;
};

struct TrivialDatabase : Error {
    using Error::Error;
};

} // namespace minans
