// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_ERROR_HPP
#define TETSHELL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tetshell {

// Base class for all toolkit failures. CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input: missing/unparseable files, precondition violations on user data.
// CLI maps these to exit code 2.
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

}  // namespace tetshell

#endif
