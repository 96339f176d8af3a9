#ifndef ARO_ERROR_HPP
#define ARO_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aro {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input problems: malformed, incomplete or inconsistent data files.
class InputError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IncompleteDataError : public InputError {
public:
    using InputError::InputError;
};

class IndexError : public InputError {
public:
    using InputError::InputError;
};

class ValidationError : public InputError {
public:
    using InputError::InputError;
};

class InsufficientDataError : public InputError {
public:
    using InputError::InputError;
};

class DegenerateReferenceError : public InputError {
public:
    using InputError::InputError;
};

// Solver configuration problems: K > N, infeasible bounds, bad counts.
class ConfigError : public Error {
public:
    using Error::Error;
};

class InfeasibilityError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

} // namespace aro

#endif // ARO_ERROR_HPP
