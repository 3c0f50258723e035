#ifndef RODVOIDS_ERRORS_HPP
#define RODVOIDS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rodvoids {

// Exit codes used by the CLI: 0 success, 2 config/input error,
// 3 numerical failure, 4 precondition not met.
struct ConfigError : std::runtime_error {
    std::string code;
    ConfigError(std::string c, const std::string& what)
        : std::runtime_error(what), code(std::move(c)) {}
};

struct InvalidInputError : std::runtime_error {
    std::string code;
    InvalidInputError(std::string c, const std::string& what)
        : std::runtime_error(what), code(std::move(c)) {}
};

struct NumericalError : std::runtime_error {
    std::string code;
    NumericalError(std::string c, const std::string& what)
        : std::runtime_error(what), code(std::move(c)) {}
};

struct PreconditionNotMet : std::runtime_error {
    std::string code;
    PreconditionNotMet(std::string c, const std::string& what)
        : std::runtime_error(what), code(std::move(c)) {}
};

} // namespace rodvoids

#endif
