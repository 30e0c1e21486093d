#ifndef NULLCOUNT_ERRORS_HPP
#define NULLCOUNT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nullcount {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed query, database, or graph text. `position` is a 0-based
/// character offset into the input (or line number for line formats).
class ParseError : public Error {
public:
    ParseError(const std::string &what, std::size_t position)
        : Error(what + " (at " + std::to_string(position) + ")"), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class SelfJoinError : public ParseError {
public:
    SelfJoinError(const std::string &relation, std::size_t position)
        : ParseError("relation " + relation + " occurs twice in one conjunct", position) {}
};

// Semantic errors. The CLI maps all of these to exit code 3.
class SemanticError : public Error {
public:
    using Error::Error;
};

class MissingAssignment : public SemanticError {
public:
    using SemanticError::SemanticError;
};

class DomainViolation : public SemanticError {
public:
    using SemanticError::SemanticError;
};

class SchemaMismatch : public SemanticError {
public:
    using SemanticError::SemanticError;
};

class PatternMismatch : public SemanticError {
public:
    using SemanticError::SemanticError;
};

class NotCodd : public SemanticError {
public:
    NotCodd() : SemanticError("database is not a Codd table") {}
};

class NonUniform : public SemanticError {
public:
    NonUniform() : SemanticError("database does not have a uniform domain") {}
};

class NotTractable : public SemanticError {
public:
    NotTractable(const std::string &what, std::vector<std::string> witnesses)
        : SemanticError(what), witnesses_(std::move(witnesses)) {}
    const std::vector<std::string> &witnesses() const noexcept { return witnesses_; }

private:
    std::vector<std::string> witnesses_;
};

class ResourceLimit : public SemanticError {
public:
    using SemanticError::SemanticError;
};

class InvalidTolerance : public SemanticError {
public:
    using SemanticError::SemanticError;
};

class IsolatedNode : public SemanticError {
public:
    explicit IsolatedNode(const std::string &node)
        : SemanticError("node " + node + " has no incident edge") {}
};

class NotBipartite : public SemanticError {
public:
    NotBipartite() : SemanticError("graph is not bipartite") {}
};

} // namespace nullcount

#endif
